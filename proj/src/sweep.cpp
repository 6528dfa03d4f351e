#include "droplab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "droplab/errors.hpp"
#include "droplab/liquid_drop.hpp"

namespace droplab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double total_energy_at_delta(const SweepPlan& plan, const GreenEvaluator& green,
                             const DropletConfig& config, double eta, double delta) {
    AnsatzSpec spec;
    spec.eta = eta;
    spec.delta = delta;
    spec.config = config;
    spec.profile = plan.profile;
    spec.quad_order = plan.quad_order;
    try {
        return evaluate_ansatz(spec, green).total;
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::infinity();  // invariant violated at this delta
    }
}

// Coarse log-spaced scan over [eta^0.5, eta^0.15], then golden-section around
// the best bracket.
double optimize_delta(const SweepPlan& plan, const GreenEvaluator& green,
                      const DropletConfig& config, double eta) {
    const double llo = 0.5 * std::log(eta);
    const double lhi = 0.15 * std::log(eta);
    const int nscan = 33;
    int ibest = -1;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nscan; ++i) {
        const double ld = llo + (lhi - llo) * i / (nscan - 1);
        const double v = total_energy_at_delta(plan, green, config, eta, std::exp(ld));
        if (v < fbest) { fbest = v; ibest = i; }
    }
    if (ibest < 0)
        throw numeric_error("optimize_delta: no feasible delta in the bracket");
    const double h = (lhi - llo) / (nscan - 1);
    double a = llo + (ibest - 1) * h, b = llo + (ibest + 1) * h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = total_energy_at_delta(plan, green, config, eta, std::exp(c));
    double fd = total_energy_at_delta(plan, green, config, eta, std::exp(d));
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = total_energy_at_delta(plan, green, config, eta, std::exp(c));
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = total_energy_at_delta(plan, green, config, eta, std::exp(d));
        }
    }
    return std::exp(0.5 * (a + b));
}
}  // namespace

void SweepPlan::validate() const {
    if (eta_values.empty()) throw config_error("sweep: eta_values must be non-empty");
    for (std::size_t i = 0; i < eta_values.size(); ++i) {
        if (!(eta_values[i] >= 1e-6))
            throw config_error("sweep: eta values must stay above the 1e-6 floor");
        if (i > 0 && !(eta_values[i] < eta_values[i - 1]))
            throw config_error("sweep: eta_values must be strictly decreasing");
    }
    if (masses.empty()) throw config_error("sweep: masses must be non-empty");
    for (double m : masses)
        if (!(m > 0.0)) throw config_error("sweep: masses must be positive");
    if (restarts < 1) throw config_error("sweep: restarts must be at least 1");
    profile.validate();
}

std::string SweepPlan::canonical() const {
    std::ostringstream os;
    os << "mode=" << (mode == DeltaMode::fixed_delta_rule ? "fixed_delta_rule" : "optimize_delta");
    os << ";kind=" << (profile.kind == ProfileKind::quadratic ? "quadratic" : "power_law");
    os << ";density=" << (profile.density == DensityMode::torus_sin ? "torus_sin" : "pure_local");
    os << ";rho_max=" << fmt(profile.rho_max);
    if (profile.kind == ProfileKind::quadratic) {
        os << ";hessian=";
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) os << fmt(profile.hessian(i, j)) << " ";
    } else {
        os << ";rho1=" << fmt(profile.rho1) << ";exponent=" << fmt(profile.exponent);
    }
    os << ";masses=";
    for (double m : masses) os << fmt(m) << " ";
    os << ";etas=";
    for (double e : eta_values) os << fmt(e) << " ";
    os << ";restarts=" << restarts << ";seed=" << seed << ";quad_order=" << quad_order;
    return os.str();
}

std::string SweepPlan::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SweepResult run_sweep(const SweepPlan& plan, const GreenEvaluator& green) {
    plan.validate();
    SweepResult out;
    double e0_sum = 0.0, M = 0.0;
    for (double m : plan.masses) {
        e0_sum += e0_ball(m);
        M += m;
    }
    const double reference = e0_sum - M * plan.profile.rho_max;
    const double sigma = interaction_scale_exponent(plan.profile);

    std::optional<DropletConfig> warm;
    for (double eta : plan.eta_values) {
        try {
            const MinimizeResult min =
                minimize_interaction(plan.masses, plan.profile, plan.restarts, plan.seed, warm);
            warm = min.config;  // warm start for the next (smaller) eta

            double delta = delta_rule(eta, plan.profile);
            if (plan.mode == DeltaMode::optimize_delta)
                delta = optimize_delta(plan, green, min.config, eta);

            AnsatzSpec spec;
            spec.eta = eta;
            spec.delta = delta;
            spec.config = min.config;
            spec.profile = plan.profile;
            spec.quad_order = plan.quad_order;
            const EnergyBreakdown breakdown = evaluate_ansatz(spec, green);

            SweepRow row;
            row.eta = eta;
            row.delta_star = delta;
            row.f_value = min.energy;
            row.energy_excess = breakdown.total - reference;
            row.residual = row.energy_excess - std::pow(eta, sigma) * min.energy;
            out.rows.push_back(row);
        } catch (const std::invalid_argument& e) {
            out.skipped.push_back("eta=" + fmt(eta) + ": " + e.what());
        }
    }
    return out;
}

FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw config_error("fit_exponent: size mismatch");
    if (x.size() < 3) throw config_error("fit_exponent: need at least 3 points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw config_error("fit_exponent: data must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    FitResult fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss_res = 0.0;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ss_res += fit.residuals[i] * fit.residuals[i];
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.std_error = n > 2 ? std::sqrt(ss_res / (double(n) - 2.0) / sxx) : 0.0;
    return fit;
}

FitResult fit_exponent_with_drop(std::vector<double> x, std::vector<double> y) {
    FitResult fit = fit_exponent(x, y);
    if (fit.r_squared < 0.999 && x.size() >= 4) {
        std::size_t imax = 0;
        for (std::size_t i = 1; i < x.size(); ++i)
            if (x[i] > x[imax]) imax = i;
        x.erase(x.begin() + static_cast<std::ptrdiff_t>(imax));
        y.erase(y.begin() + static_cast<std::ptrdiff_t>(imax));
        fit = fit_exponent(x, y);
        fit.dropped_largest = true;
    }
    return fit;
}

std::string sweep_csv(const SweepPlan& plan, const SweepResult& result) {
    std::ostringstream os;
    os << "# droplab sweep\n";
    os << "# plan " << plan.hash() << "\n";
    os << "# " << plan.canonical() << "\n";
    for (const std::string& s : result.skipped) os << "# skipped " << s << "\n";
    os << "eta,delta_star,f_value,energy_excess,residual\n";
    for (const SweepRow& r : result.rows)
        os << fmt(r.eta) << "," << fmt(r.delta_star) << "," << fmt(r.f_value) << ","
           << fmt(r.energy_excess) << "," << fmt(r.residual) << "\n";
    return os.str();
}

std::string fit_summary(const std::string& label, const FitResult& fit) {
    std::ostringstream os;
    os << label << ": exponent = " << fmt(fit.exponent) << " +- " << fmt(1.96 * fit.std_error)
       << ", r^2 = " << fmt(fit.r_squared)
       << (fit.dropped_largest ? " (largest point dropped)" : "") << "\n";
    return os.str();
}

}  // namespace droplab
