#include "droplab/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "droplab/errors.hpp"

namespace droplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

// Box-Muller on raw uniform doubles; keeps the random stream independent of
// the standard library's unspecified normal_distribution algorithm.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_) { have_ = false; return spare_; }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }
private:
    double uniform() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double grad_norm(const std::vector<Vec3>& g) {
    double s = 0.0;
    for (const Vec3& v : g) s += dot(v, v);
    return std::sqrt(s);
}

// Initial configurations: regular simplex-ish shape on the unit sphere, then
// dilated to the virial-predicted scale.
std::vector<Vec3> reference_shape(int n) {
    std::vector<Vec3> p;
    if (n == 1) return {Vec3{0, 0, 0}};
    if (n == 2) return {Vec3{1, 0, 0}, Vec3{-1, 0, 0}};
    if (n == 3) {
        const double s = std::sqrt(3.0) / 2.0;
        return {Vec3{1, 0, 0}, Vec3{-0.5, s, 0}, Vec3{-0.5, -s, 0}};
    }
    if (n == 4) {
        const double c = 1.0 / std::sqrt(3.0);
        return {Vec3{c, c, c}, Vec3{c, -c, -c}, Vec3{-c, c, -c}, Vec3{-c, -c, c}};
    }
    // Fibonacci sphere
    const double ga = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        p.push_back({r * std::cos(ga * i), r * std::sin(ga * i), z});
    }
    return p;
}
}  // namespace

bool Mat3Sym::is_diagonal() const {
    return a[1] == 0.0 && a[2] == 0.0 && a[3] == 0.0 && a[5] == 0.0 && a[6] == 0.0 && a[7] == 0.0;
}

bool Mat3Sym::is_positive_definite() const {
    const double m1 = a[0];
    const double m2 = a[0] * a[4] - a[1] * a[3];
    const double m3 = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                      a[2] * (a[3] * a[7] - a[4] * a[6]);
    return m1 > 0.0 && m2 > 0.0 && m3 > 0.0;
}

void ConfinementProfile::validate() const {
    if (!(rho_max > 0.0)) throw config_error("profile: rho_max must be positive");
    if (kind == ProfileKind::quadratic) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < i; ++j)
                if (hessian(i, j) != hessian(j, i))
                    throw config_error("profile: quadratic form matrix must be symmetric");
        if (!hessian.is_positive_definite())
            throw config_error("profile: quadratic form matrix must be positive definite");
        if (density == DensityMode::torus_sin && !hessian.is_diagonal())
            throw config_error("profile: torus_sin density requires a diagonal matrix");
    } else {
        if (!(rho1 > 0.0)) throw config_error("profile: rho1 must be positive");
        if (!(exponent > 2.0)) throw config_error("profile: power-law exponent must exceed 2");
        if (density == DensityMode::torus_sin)
            throw config_error("profile: torus_sin density is defined for the quadratic kind only");
    }
}

double ConfinementProfile::q(const Vec3& x) const {
    if (kind == ProfileKind::quadratic) return dot(x, hessian.apply(x));
    const double r = norm(x);
    return rho1 * std::pow(r, exponent);
}

Vec3 ConfinementProfile::grad_q(const Vec3& x) const {
    if (kind == ProfileKind::quadratic) return 2.0 * hessian.apply(x);
    const double r = norm(x);
    if (r == 0.0) return {0, 0, 0};
    return rho1 * exponent * std::pow(r, exponent - 2.0) * x;
}

double ConfinementProfile::rho(const TorusPoint& x) const {
    if (density == DensityMode::torus_sin) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double sn = std::sin(kPi * x[i]);
            s += hessian(i, i) * sn * sn / (kPi * kPi);
        }
        return rho_max - s;
    }
    const Vec3 xm = min_image(x, TorusPoint{});
    const double r = norm(xm);
    double chi = 1.0;
    if (r >= 0.45) {
        chi = 0.0;
    } else if (r > 0.25) {
        const double s = (r - 0.25) / 0.2;
        chi = 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    }
    return rho_max - q(xm) * chi;
}

double DropletConfig::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
}

double DropletConfig::min_pair_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            d = std::min(d, norm(positions[i] - positions[j]));
    return d;
}

void DropletConfig::validate() const {
    if (masses.empty() || masses.size() != positions.size())
        throw std::invalid_argument("droplet config: masses/positions size mismatch");
    for (double m : masses)
        if (!(m > 0.0)) throw std::invalid_argument("droplet config: masses must be positive");
    if (!(min_pair_distance() > 0.0))
        throw std::invalid_argument("droplet config: coincident droplet positions");
}

double interaction_energy(const DropletConfig& config, const ConfinementProfile& profile) {
    config.validate();
    const std::size_t n = config.masses.size();
    double rep = 0.0, conf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        conf += config.masses[i] * profile.q(config.positions[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = norm(config.positions[i] - config.positions[j]);
            // ordered-pair convention: (i,j) and (j,i) both counted
            rep += 2.0 * config.masses[i] * config.masses[j] / (kFourPi * d);
        }
    }
    return rep + conf;
}

std::vector<Vec3> interaction_gradient(const DropletConfig& config,
                                       const ConfinementProfile& profile) {
    config.validate();
    const std::size_t n = config.masses.size();
    std::vector<Vec3> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = config.masses[i] * profile.grad_q(config.positions[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 d = config.positions[i] - config.positions[j];
            const double r = norm(d);
            const Vec3 f = (2.0 * config.masses[i] * config.masses[j] / (kFourPi * r * r * r)) * d;
            g[i] -= f;
            g[j] += f;
        }
    return g;
}

namespace {

struct DescentOutcome {
    std::vector<Vec3> x;
    double energy;
    double gnorm;
    bool converged;
};

// Gaussian elimination with partial pivoting; A is n x n row-major.
bool solve_dense(std::vector<double> A, std::vector<double> b, std::vector<double>& out, int n) {
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
        if (std::abs(A[piv * n + k]) < 1e-300) return false;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double m = A[i * n + k] / A[k * n + k];
            if (m == 0.0) continue;
            for (int j = k; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
            b[i] -= m * b[k];
        }
    }
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= A[i * n + j] * out[j];
        out[static_cast<std::size_t>(i)] = s / A[i * n + i];
    }
    return true;
}

double& component(std::vector<Vec3>& x, int j) {
    Vec3& v = x[static_cast<std::size_t>(j / 3)];
    return j % 3 == 0 ? v.x : j % 3 == 1 ? v.y : v.z;
}

DescentOutcome descend(const std::vector<double>& masses, std::vector<Vec3> x,
                       const ConfinementProfile& profile) {
    DropletConfig c{masses, x};
    const int max_iter = 50000;
    double f = interaction_energy(c, profile);
    double step = 1.0;
    bool converged = false;
    std::vector<Vec3> g;
    double gn = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        g = interaction_gradient(c, profile);
        gn = grad_norm(g);
        if (gn <= 1e-9 * (1.0 + std::abs(f))) { converged = true; break; }

        // cap displacement at 0.1x the current minimal pair distance
        double step_cap = std::numeric_limits<double>::infinity();
        if (masses.size() > 1) {
            double gmax = 0.0;
            for (const Vec3& v : g) gmax = std::max(gmax, norm(v));
            if (gmax > 0.0) step_cap = 0.1 * c.min_pair_distance() / gmax;
        }
        double t = std::min(2.0 * step, step_cap);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            DropletConfig trial = c;
            for (std::size_t i = 0; i < trial.positions.size(); ++i)
                trial.positions[i] -= t * g[i];
            double ft;
            try {
                ft = interaction_energy(trial, profile);
            } catch (const std::invalid_argument&) {
                t *= 0.5;
                continue;
            }
            if (ft <= f - 1e-4 * t * gn * gn) {
                c = std::move(trial);
                f = ft;
                step = t;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // line search stalled at machine precision
    }

    // Armijo progress dies near gn ~ 1e-7 because the required decrease drops
    // below machine precision relative to f; finish with damped Newton on a
    // finite-difference Hessian of the analytic gradient.
    const int dim = 3 * static_cast<int>(masses.size());
    auto flat_grad = [&](const DropletConfig& cc, std::vector<double>& v) {
        const std::vector<Vec3> gg = interaction_gradient(cc, profile);
        v.resize(static_cast<std::size_t>(dim));
        for (std::size_t i = 0; i < gg.size(); ++i) {
            v[3 * i] = gg[i].x;
            v[3 * i + 1] = gg[i].y;
            v[3 * i + 2] = gg[i].z;
        }
    };
    for (int it = 0; it < 40 && !converged; ++it) {
        g = interaction_gradient(c, profile);
        gn = grad_norm(g);
        if (gn <= 1e-9 * (1.0 + std::abs(f))) { converged = true; break; }

        const double h = 1e-6;
        std::vector<double> H(static_cast<std::size_t>(dim * dim));
        std::vector<double> gp, gm, rhs(static_cast<std::size_t>(dim)), d;
        bool built = true;
        try {
            for (int j = 0; j < dim; ++j) {
                DropletConfig cp = c, cm = c;
                component(cp.positions, j) += h;
                component(cm.positions, j) -= h;
                flat_grad(cp, gp);
                flat_grad(cm, gm);
                for (int i = 0; i < dim; ++i)
                    H[static_cast<std::size_t>(i * dim + j)] = (gp[i] - gm[i]) / (2.0 * h);
            }
        } catch (const std::invalid_argument&) {
            built = false;
        }
        if (!built) break;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < i; ++j) {
                const double avg = 0.5 * (H[static_cast<std::size_t>(i * dim + j)] +
                                          H[static_cast<std::size_t>(j * dim + i)]);
                H[static_cast<std::size_t>(i * dim + j)] = avg;
                H[static_cast<std::size_t>(j * dim + i)] = avg;
            }
        for (std::size_t i = 0; i < g.size(); ++i) {
            rhs[3 * i] = -g[i].x;
            rhs[3 * i + 1] = -g[i].y;
            rhs[3 * i + 2] = -g[i].z;
        }
        if (!solve_dense(H, rhs, d, dim)) break;

        bool accepted = false;
        double lam = 1.0;
        for (int bt = 0; bt < 30; ++bt, lam *= 0.5) {
            DropletConfig trial = c;
            for (int j = 0; j < dim; ++j) component(trial.positions, j) += lam * d[j];
            try {
                std::vector<double> gt;
                flat_grad(trial, gt);
                double gnt = 0.0;
                for (double v : gt) gnt += v * v;
                gnt = std::sqrt(gnt);
                if (gnt < gn) {
                    f = interaction_energy(trial, profile);
                    c = std::move(trial);
                    accepted = true;
                    break;
                }
            } catch (const std::invalid_argument&) {
            }
        }
        if (!accepted) break;  // saddle-adjacent or indefinite curvature
    }

    return {std::move(c.positions), f, gn, converged};
}
}  // namespace

MinimizeResult minimize_interaction(const std::vector<double>& masses,
                                    const ConfinementProfile& profile, int restarts,
                                    std::uint64_t seed,
                                    const std::optional<DropletConfig>& warm_start) {
    profile.validate();
    if (masses.empty()) throw config_error("minimize_interaction: no masses given");
    for (double m : masses)
        if (!(m > 0.0)) throw config_error("minimize_interaction: masses must be positive");
    if (restarts < 1 && !warm_start)
        throw config_error("minimize_interaction: restarts must be at least 1");

    const int n = static_cast<int>(masses.size());
    const double s = profile.homogeneity();

    // virial-predicted dilation scale of the reference shape
    double scale = 1.0;
    {
        DropletConfig ref{masses, reference_shape(n)};
        if (n > 1) {
            const VirialReport v = virial_check(ref, profile);
            if (v.repulsion > 0.0 && v.confinement > 0.0)
                scale = std::pow(v.repulsion / (s * v.confinement), 1.0 / (s + 1.0));
        } else {
            scale = 0.1;
        }
    }

    MinimizeResult best;
    best.energy = std::numeric_limits<double>::infinity();
    std::vector<double> minima;

    auto record = [&](DescentOutcome out, int restart_index) {
        bool fresh = true;
        for (double e : minima)
            if (std::abs(e - out.energy) <= 1e-6 * (1.0 + std::abs(e))) { fresh = false; break; }
        if (fresh) minima.push_back(out.energy);
        if (out.energy < best.energy) {
            best.config = DropletConfig{masses, out.x};
            best.energy = out.energy;
            best.gradient_norm = out.gnorm;
            best.converged = out.converged;
            best.best_restart = restart_index;
        }
    };

    if (warm_start) {
        warm_start->validate();
        record(descend(masses, warm_start->positions, profile), -1);
    }

    // restart 0 is the deterministic dilated reference shape
    if (restarts >= 1) {
        std::vector<Vec3> x = reference_shape(n);
        for (Vec3& p : x) p = scale * p;
        record(descend(masses, std::move(x), profile), 0);
    }

    for (int r = 1; r < restarts; ++r) {
        NormalSource normals(mix_seed(seed, static_cast<std::uint64_t>(r)));
        std::vector<Vec3> x(static_cast<std::size_t>(n));
        bool distinct = false;
        while (!distinct) {
            for (Vec3& p : x) p = {scale * normals.next(), scale * normals.next(),
                                   scale * normals.next()};
            distinct = true;
            for (int i = 0; i < n && distinct; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (norm(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]) <
                        1e-9 * scale) { distinct = false; break; }
        }
        record(descend(masses, std::move(x), profile), r);
    }

    if (!best.converged)
        throw numeric_error("minimize_interaction: no restart converged within the iteration cap");
    std::sort(minima.begin(), minima.end());
    best.distinct_minima = std::move(minima);
    return best;
}

VirialReport virial_check(const DropletConfig& config, const ConfinementProfile& profile) {
    config.validate();
    VirialReport out;
    const std::size_t n = config.masses.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.confinement += config.masses[i] * profile.q(config.positions[i]);
        for (std::size_t j = i + 1; j < n; ++j)
            out.repulsion += 2.0 * config.masses[i] * config.masses[j] /
                             (kFourPi * norm(config.positions[i] - config.positions[j]));
    }
    const double tot = out.repulsion + out.confinement;
    out.residual = tot > 0.0
                       ? std::abs(out.repulsion - profile.homogeneity() * out.confinement) / tot
                       : 0.0;
    return out;
}

}  // namespace droplab
