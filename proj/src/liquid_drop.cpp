#include "droplab/liquid_drop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "droplab/errors.hpp"

namespace droplab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double coeff_a() { return 3.0 * std::cbrt(4.0 * kPi / 3.0); }
double coeff_b() { return std::pow(3.0 / (4.0 * kPi), 5.0 / 3.0) * (8.0 * kPi / 15.0); }

void require_positive_mass(double m) {
    if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
}

// Golden-section minimization on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-13 * (1.0 + std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
}  // namespace

BallModel::BallModel() : perimeter_coeff(coeff_a()), coulomb_coeff(coeff_b()) {}

double e0_ball(double m) {
    require_positive_mass(m);
    return coeff_a() * std::pow(m, 2.0 / 3.0) + coeff_b() * std::pow(m, 5.0 / 3.0);
}

double e0_ball_prime(double m) {
    require_positive_mass(m);
    return (2.0 / 3.0) * coeff_a() * std::pow(m, -1.0 / 3.0) +
           (5.0 / 3.0) * coeff_b() * std::pow(m, 2.0 / 3.0);
}

double e0_ball_second_derivative(double m) {
    require_positive_mass(m);
    return -(2.0 / 9.0) * coeff_a() * std::pow(m, -4.0 / 3.0) +
           (10.0 / 9.0) * coeff_b() * std::pow(m, -1.0 / 3.0);
}

double concavity_threshold() { return coeff_a() / (5.0 * coeff_b()); }

double binary_split_threshold() {
    const double c = std::cbrt(2.0);
    return (coeff_a() / coeff_b()) * (c - 1.0) / (1.0 - 1.0 / (c * c));
}

MassPartition optimal_partition(double M, int n_max, double admissible_cap, int grid) {
    if (!(M > 0.0)) throw config_error("optimal_partition: total mass must be positive");
    if (n_max < 1) throw config_error("optimal_partition: n_max must be at least 1");
    if (!(admissible_cap > 0.0)) throw config_error("optimal_partition: cap must be positive");
    if (static_cast<double>(n_max) * admissible_cap < M)
        throw config_error("optimal_partition: n_max * cap < M, no feasible partition");
    if (grid < 8) throw config_error("optimal_partition: grid too coarse");

    const double cap = admissible_cap;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> best;

    auto consider = [&](std::vector<double> masses) {
        for (double m : masses)
            if (!(m > 0.0) || m > cap * (1.0 + 1e-12)) return;
        double obj = 0.0;
        for (double m : masses) obj += e0_ball(m);
        // strict improvement: ties go to the candidate seen first (smaller n)
        if (obj < best_obj * (1.0 - 1e-13)) {
            best_obj = obj;
            best = std::move(masses);
        }
    };

    for (int n = 1; n <= n_max; ++n) {
        for (int k = 0; k < n; ++k) {  // k masses pinned at the cap
            const int f = n - k;       // free masses
            const double Mr = M - k * cap;
            if (!(Mr > 0.0)) break;
            if (Mr > f * cap * (1.0 + 1e-12)) continue;

            std::vector<double> base(static_cast<std::size_t>(k), cap);

            // equal free masses
            {
                std::vector<double> cand = base;
                cand.insert(cand.end(), static_cast<std::size_t>(f), Mr / f);
                consider(std::move(cand));
            }

            // one small mass s, the remaining f-1 equal at (Mr - s)/(f - 1);
            // at most one mass below the concavity threshold can be optimal
            if (f >= 2) {
                auto objective = [&](double s) {
                    const double ml = (Mr - s) / (f - 1);
                    if (!(s > 0.0) || ml > cap || ml < s) return std::numeric_limits<double>::infinity();
                    return e0_ball(s) + (f - 1) * e0_ball(ml);
                };
                const double s_hi = Mr / f;
                const double s_lo = std::max(s_hi * 1e-9, Mr - (f - 1) * cap);
                if (s_lo < s_hi) {
                    int ibest = -1;
                    double fbest = std::numeric_limits<double>::infinity();
                    for (int i = 0; i <= grid; ++i) {
                        const double s = s_lo + (s_hi - s_lo) * i / grid;
                        const double v = objective(s);
                        if (v < fbest) { fbest = v; ibest = i; }
                    }
                    if (ibest >= 0) {
                        const double h = (s_hi - s_lo) / grid;
                        const double lo = std::max(s_lo, s_lo + (ibest - 1) * h);
                        const double hi = std::min(s_hi, s_lo + (ibest + 1) * h);
                        const double s = golden_min(objective, lo, hi);
                        if (std::isfinite(objective(s))) {
                            std::vector<double> cand = base;
                            cand.push_back(s);
                            cand.insert(cand.end(), static_cast<std::size_t>(f - 1),
                                        (Mr - s) / (f - 1));
                            consider(std::move(cand));
                        }
                    }
                }
            }
        }
    }

    if (best.empty()) throw numeric_error("optimal_partition: no feasible candidate found");

    std::sort(best.begin(), best.end(), std::greater<>());
    // renormalize rounding drift so Σ m^i = M holds to 1e-12
    double sum = 0.0;
    for (double m : best) sum += m;
    for (double& m : best) m *= M / sum;

    MassPartition out;
    out.masses = best;
    out.total = M;
    out.objective = 0.0;
    for (double m : out.masses) out.objective += e0_ball(m);

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mean = 0.0;
    int interior = 0;
    for (double m : out.masses) {
        if (m > cap * (1.0 - 1e-9)) continue;  // cap-saturated, own multiplier
        const double d = e0_ball_prime(m);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        mean += d;
        ++interior;
    }
    out.kkt_residual = interior >= 2 ? (hi - lo) / (mean / interior) : 0.0;
    return out;
}

}  // namespace droplab
