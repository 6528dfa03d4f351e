#include "droplab/ansatz.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "droplab/errors.hpp"
#include "droplab/liquid_drop.hpp"
#include "droplab/quadrature.hpp"

namespace droplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

double droplet_radius(double m) { return std::cbrt(3.0 * m / kFourPi); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void AnsatzSpec::validate() const {
    config.validate();
    profile.validate();
    if (!(eta > 0.0)) throw std::invalid_argument("ansatz: eta must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("ansatz: delta must be positive");
    const std::size_t n = config.masses.size();
    double r_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ri = droplet_radius(config.masses[i]);
        r_max = std::max(r_max, ri);
        const TorusPoint ci = wrap(delta * config.positions[i]);
        if (torus_distance(ci, TorusPoint{}) + eta * ri >= 0.25)
            throw std::invalid_argument("ansatz: droplet support leaves B_{1/4}(0)");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const TorusPoint ci = wrap(delta * config.positions[i]);
            const TorusPoint cj = wrap(delta * config.positions[j]);
            const double rij =
                eta * (droplet_radius(config.masses[i]) + droplet_radius(config.masses[j]));
            if (torus_distance(ci, cj) <= rij)
                throw std::invalid_argument("ansatz: droplet supports overlap");
        }
    if (n > 1 && !(eta * r_max < delta * config.min_pair_distance() / 4.0))
        throw std::invalid_argument("ansatz: droplet size is not dominated by the separation scale");
}

std::string EnergyBreakdown::csv_header() {
    return "eta,delta,perimeter,nl_self_newt,nl_self_reg,nl_cross_newt,nl_cross_reg,"
           "confinement,total,residual";
}

std::string EnergyBreakdown::csv_row(double residual) const {
    return fmt(eta) + "," + fmt(delta) + "," + fmt(perimeter_term) + "," +
           fmt(nonlocal_self_newtonian) + "," + fmt(nonlocal_self_regular) + "," +
           fmt(nonlocal_cross_newtonian) + "," + fmt(nonlocal_cross_regular) + "," +
           fmt(confinement_term) + "," + fmt(total) + "," + fmt(residual);
}

EnergyBreakdown evaluate_ansatz(const AnsatzSpec& spec, const GreenEvaluator& green) {
    spec.validate();
    const std::size_t n = spec.config.masses.size();
    EnergyBreakdown out;
    out.eta = spec.eta;
    out.delta = spec.delta;

    double sum_m2 = 0.0, r_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = spec.config.masses[i];
        const double r = droplet_radius(m);
        out.perimeter_term += kFourPi * r * r;
        out.nonlocal_self_newtonian += (8.0 * kPi / 15.0) * std::pow(r, 5);
        sum_m2 += m * m;
        r_max = std::max(r_max, r);
    }
    out.nonlocal_self_regular = spec.eta * green.regular_at_zero() * sum_m2;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mi = spec.config.masses[i], mj = spec.config.masses[j];
            const double ri = droplet_radius(mi), rj = droplet_radius(mj);
            const TorusPoint ci = wrap(spec.delta * spec.config.positions[i]);
            const TorusPoint cj = wrap(spec.delta * spec.config.positions[j]);
            const GreenEvaluator::PairEnergy pe =
                green.ball_pair_coulomb(mi, spec.eta * ri, ci, mj, spec.eta * rj, cj);
            // ordered pairs: (i,j) and (j,i)
            out.nonlocal_cross_newtonian += 2.0 * spec.eta * pe.newtonian;
            out.nonlocal_cross_regular += 2.0 * spec.eta * pe.periodic;
            out.regular_error_bound += 2.0 * spec.eta * pe.error_bound;
        }
    // self regular curvature remainder: same O(r^2 ||D^2 g||) budget
    out.regular_error_bound += spec.eta * sum_m2 * std::pow(spec.eta * r_max, 2);

    auto rho_fn = [&](const Vec3& x) { return spec.profile.rho(wrap(x)); };
    for (std::size_t i = 0; i < n; ++i) {
        const double m = spec.config.masses[i];
        const double r = spec.eta * droplet_radius(m);
        const Vec3 c = spec.delta * spec.config.positions[i];
        int order = spec.quad_order;
        double prev = ball_average(rho_fn, c, r, order);
        double cur = prev;
        bool converged = false;
        while (order <= 128) {
            order *= 2;
            cur = ball_average(rho_fn, c, r, order);
            if (std::abs(cur - prev) <= 1e-9 * std::max(std::abs(cur), 1e-30)) {
                converged = true;
                break;
            }
            prev = cur;
        }
        if (!converged)
            throw numeric_error("evaluate_ansatz: confinement quadrature failed to converge");
        out.confinement_term -= m * cur;
    }

    out.total = out.perimeter_term + out.nonlocal_self_newtonian + out.nonlocal_self_regular +
                out.nonlocal_cross_newtonian + out.nonlocal_cross_regular + out.confinement_term;
    return out;
}

double interaction_scale_exponent(const ConfinementProfile& profile) {
    const double s = profile.homogeneity();
    return s / (s + 1.0);
}

double delta_rule(double eta, const ConfinementProfile& profile) {
    return std::pow(eta, 1.0 / (profile.homogeneity() + 1.0));
}

double expansion_residual(const AnsatzSpec& spec, const EnergyBreakdown& breakdown) {
    double e0_sum = 0.0;
    for (double m : spec.config.masses) e0_sum += e0_ball(m);
    const double M = spec.config.total_mass();
    const double f = interaction_energy(spec.config, spec.profile);
    const double sigma = interaction_scale_exponent(spec.profile);
    const double predicted = e0_sum - M * spec.profile.rho_max + std::pow(spec.eta, sigma) * f;
    return breakdown.total - predicted;
}

double optimal_delta_model(double eta, const DropletConfig& config,
                           const ConfinementProfile& profile) {
    const VirialReport v = virial_check(config, profile);
    if (!(v.repulsion > 0.0) || !(v.confinement > 0.0))
        throw std::invalid_argument("optimal_delta_model: needs both repulsion and confinement");
    const double s = profile.homogeneity();
    return std::pow(eta * v.repulsion / (s * v.confinement), 1.0 / (s + 1.0));
}

}  // namespace droplab
