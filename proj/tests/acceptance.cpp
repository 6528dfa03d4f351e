// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails.  Each check states its tolerance inline.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "droplab/ansatz.hpp"
#include "droplab/config.hpp"
#include "droplab/errors.hpp"
#include "droplab/green.hpp"
#include "droplab/interaction.hpp"
#include "droplab/liquid_drop.hpp"
#include "droplab/sweep.hpp"
#include "droplab/torus.hpp"
#include "oracles.hpp"

using namespace droplab;

namespace {

constexpr double kPi = 3.14159265358979323846;
int failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. ball-model coefficients: the identity a/(5b) = 2π and an independent
//    Monte-Carlo check of the unit-ball Coulomb integral 8π/15 behind b
void criterion1() {
    const BallModel model;
    const double ratio = model.perimeter_coeff / (5.0 * model.coulomb_coeff);
    const bool id_ok = std::abs(ratio - 2.0 * kPi) < 1e-12;

    const oracles::MonteCarlo mc = oracles::mc_ball_self_coulomb(1.0, 10'000'000, 2024);
    const double target = 8.0 * kPi / 15.0;
    const bool mc_ok = std::abs(mc.mean - target) < 3.0 * mc.sigma;

    report(1, "ball-model coefficients", id_ok && mc_ok,
           "a/(5b)-2pi = " + fmt(ratio - 2.0 * kPi) + ", MC dev " +
               fmt(std::abs(mc.mean - target)) + " vs 3sigma " + fmt(3.0 * mc.sigma));
}

// 2. the second derivative of e0 changes sign exactly at 2π
void criterion2() {
    double lo = 1.0, hi = 20.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (e0_ball_second_derivative(mid) < 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    const bool ok = std::abs(root - 2.0 * kPi) < 1e-10 &&
                    std::abs(concavity_threshold() - 2.0 * kPi) < 1e-12;
    report(2, "concavity changes sign at 2*pi", ok, "bisection root " + fmt(root));
}

// 3. the binary-split crossover e0(M) = 2 e0(M/2) at the closed-form mass
void criterion3() {
    auto h = [](double M) { return e0_ball(M) - 2.0 * e0_ball(M / 2.0); };
    double lo = 15.0, hi = 30.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    const double cross = 0.5 * (lo + hi);
    const double closed = binary_split_threshold();
    const bool ok = std::abs(cross - closed) < 1e-6 && h(closed - 1e-4) < 0.0 &&
                    h(closed + 1e-4) > 0.0;
    report(3, "binary-split threshold", ok,
           "crossover " + fmt(cross) + " vs closed form " + fmt(closed));
}

// 4. two equal masses under q = |x|^2 settle at separation 2(m/16π)^{1/3}
//    with the virial balance R = 2Q
void criterion4() {
    bool ok = true;
    std::string detail;
    ConfinementProfile p;
    p.kind = ProfileKind::quadratic;
    for (double m : {1.0, 5.0, 20.0}) {
        const MinimizeResult res = minimize_interaction({m, m}, p, 16, 71);
        const double dstar = std::cbrt(m / (16.0 * kPi));
        const double sep = norm(res.config.positions[0] - res.config.positions[1]);
        const double rel = std::abs(sep - 2.0 * dstar) / (2.0 * dstar);
        const VirialReport v = virial_check(res.config, p);
        ok = ok && res.converged && rel < 1e-6 && v.residual < 1e-6;
        detail += "m=" + fmt(m) + " rel " + fmt(rel) + " virial " + fmt(v.residual) + "; ";
    }
    report(4, "two-droplet separation (m/16pi)^(1/3)", ok, detail);
}

// 5. Ewald values agree with a damped reciprocal-space reference sum at
//    random points, and are stable under a ±20% change of the splitting
void criterion5() {
    const GreenEvaluator base;
    GreenParams lo_p, hi_p;
    lo_p.ewald_alpha *= 0.8;
    hi_p.ewald_alpha *= 1.2;
    const GreenEvaluator lo(lo_p), hi(hi_p);

    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double max_oracle = 0.0, max_alpha = 0.0;
    int tested = 0;
    while (tested < 20) {
        const TorusPoint x{{u(rng), u(rng), u(rng)}};
        if (torus_distance(x, TorusPoint{}) < 0.1) continue;
        ++tested;
        const double g = base.green(x);
        max_oracle = std::max(max_oracle, std::abs(g - oracles::fourier_green(x.vec())));
        max_alpha = std::max(max_alpha, std::abs(g - lo.green(x)));
        max_alpha = std::max(max_alpha, std::abs(g - hi.green(x)));
    }
    const bool ok = max_oracle < 1e-6 && max_alpha < 1e-9;
    report(5, "periodic Green's function vs reference sum", ok,
           "max dev " + fmt(max_oracle) + ", alpha sensitivity " + fmt(max_alpha));
}

SweepPlan base_plan() {
    SweepPlan plan;
    plan.eta_values = {1e-2, 1e-3, 1e-4, 1e-5};
    plan.mode = DeltaMode::fixed_delta_rule;
    plan.profile.kind = ProfileKind::quadratic;
    plan.profile.hessian = Mat3Sym::identity();
    plan.profile.density = DensityMode::pure_local;
    plan.masses = {0.01, 0.01};
    plan.restarts = 12;
    plan.seed = 7;
    return plan;
}

// 6. along δ = η^{1/3}, the energy excess scales like η^{2/3} and the
//    remainder beyond the two-term expansion is o(η^{2/3})
void criterion6(const GreenEvaluator& green) {
    const SweepPlan plan = base_plan();
    const SweepResult res = run_sweep(plan, green);
    std::vector<double> etas, excess;
    bool monotone = true;
    double prev = 1e300;
    for (const SweepRow& r : res.rows) {
        etas.push_back(r.eta);
        excess.push_back(std::abs(r.energy_excess));
        const double rel = std::abs(r.residual) / std::pow(r.eta, 2.0 / 3.0);
        if (rel >= prev) monotone = false;
        prev = rel;
    }
    bool ok = res.rows.size() == 4 && monotone;
    double slope = 0.0;
    if (etas.size() >= 3) {
        const FitResult fit = fit_exponent(etas, excess);
        slope = fit.exponent;
        ok = ok && std::abs(slope - 2.0 / 3.0) < 0.02;
    } else {
        ok = false;
    }
    report(6, "excess-energy exponent 2/3 on the eta^(1/3) rule", ok,
           "slope " + fmt(slope) + ", residual/eta^(2/3) decreasing: " +
               (monotone ? "yes" : "no"));
}

// 7. the optimized separation scale recovers δ* ~ η^{1/(s+1)} for both the
//    quadratic (1/3) and the quartic (1/5) confinement
void criterion7(const GreenEvaluator& green) {
    auto delta_slope = [&](SweepPlan plan) {
        plan.mode = DeltaMode::optimize_delta;
        const SweepResult res = run_sweep(plan, green);
        std::vector<double> etas, deltas;
        for (const SweepRow& r : res.rows) {
            etas.push_back(r.eta);
            deltas.push_back(r.delta_star);
        }
        return fit_exponent(etas, deltas).exponent;
    };
    const double quad = delta_slope(base_plan());
    SweepPlan quartic = base_plan();
    quartic.profile.kind = ProfileKind::power_law;
    quartic.profile.rho1 = 1.0;
    quartic.profile.exponent = 4.0;
    const double quart = delta_slope(quartic);
    const bool ok = std::abs(quad - 1.0 / 3.0) < 0.02 && std::abs(quart - 0.2) < 0.02;
    report(7, "optimal-delta exponents 1/3 and 1/5", ok,
           "quadratic " + fmt(quad) + ", quartic " + fmt(quart));
}

// 8. a single droplet has no interaction term: its excess is dominated by
//    the O(η) self correction, so the fitted exponent is near 1
void criterion8(const GreenEvaluator& green) {
    SweepPlan plan = base_plan();
    plan.masses = {1.0};
    const SweepResult res = run_sweep(plan, green);
    std::vector<double> etas, excess;
    for (const SweepRow& r : res.rows) {
        etas.push_back(r.eta);
        excess.push_back(std::abs(r.energy_excess));
    }
    const double slope = fit_exponent(etas, excess).exponent;
    const bool ok = slope >= 0.9;
    report(8, "single-droplet excess exponent >= 0.9", ok, "slope " + fmt(slope));
}

// 9. structural properties: analytic gradients, symmetry invariance,
//    partition optimality conditions, and run-to-run determinism
void criterion9() {
    bool ok = true;
    std::string detail;

    // gradient vs central differences, 100 random configurations
    {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> um(0.2, 3.0), ux(-1.0, 1.0);
        ConfinementProfile p;
        p.kind = ProfileKind::quadratic;
        p.hessian = Mat3Sym{{2, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 3}};
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            DropletConfig c;
            const int n = 2 + static_cast<int>(t % 3);
            for (int i = 0; i < n; ++i) {
                c.masses.push_back(um(rng));
                c.positions.push_back({ux(rng), ux(rng), ux(rng)});
            }
            if (c.min_pair_distance() < 0.1) continue;
            const std::vector<Vec3> g = interaction_gradient(c, p);
            double gmax = 0.0;
            for (const Vec3& v : g) gmax = std::max(gmax, norm(v));
            const double h = 1e-6;
            for (int k = 0; k < n; ++k)
                for (int axis = 0; axis < 3; ++axis) {
                    DropletConfig cp = c, cm = c;
                    auto coord = [axis](Vec3& v) -> double& {
                        return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
                    };
                    coord(cp.positions[k]) += h;
                    coord(cm.positions[k]) -= h;
                    const double fd =
                        (interaction_energy(cp, p) - interaction_energy(cm, p)) / (2 * h);
                    Vec3 gv = g[k];
                    const double gk = coord(gv);
                    worst = std::max(worst, std::abs(gk - fd) / (1.0 + gmax));
                }
        }
        ok = ok && worst < 1e-6;
        detail += "grad dev " + fmt(worst) + "; ";
    }

    // permutation and rotation invariance of the energy
    {
        ConfinementProfile p;
        p.kind = ProfileKind::quadratic;
        DropletConfig c{{1.0, 2.0, 0.5},
                        {{0.3, 0.1, -0.2}, {-0.4, 0.2, 0.1}, {0.1, -0.5, 0.3}}};
        DropletConfig perm{{0.5, 1.0, 2.0},
                           {{0.1, -0.5, 0.3}, {0.3, 0.1, -0.2}, {-0.4, 0.2, 0.1}}};
        const double e1 = interaction_energy(c, p);
        double dev = std::abs(e1 - interaction_energy(perm, p));
        const double th = 1.1;
        DropletConfig rot = c;
        for (Vec3& x : rot.positions)
            x = {std::cos(th) * x.x - std::sin(th) * x.y,
                 std::sin(th) * x.x + std::cos(th) * x.y, x.z};
        dev = std::max(dev, std::abs(e1 - interaction_energy(rot, p)));
        ok = ok && dev < 1e-12;
        detail += "symmetry dev " + fmt(dev) + "; ";
    }

    // partition optimality: stationarity residual and at most one small mass
    {
        bool part_ok = true;
        for (double M : {1.0, 10.0, 25.0, 40.0, 60.0}) {
            const MassPartition p = optimal_partition(M, 12, 4.0 * kPi);
            int small = 0;
            for (double m : p.masses)
                if (m < 2.0 * kPi) ++small;
            part_ok = part_ok && p.kkt_residual < 1e-6 && small <= 1;
        }
        ok = ok && part_ok;
        detail += std::string("partition ") + (part_ok ? "ok" : "bad") + "; ";
    }

    // run-to-run determinism of the randomized minimizer
    {
        ConfinementProfile p;
        p.kind = ProfileKind::quadratic;
        const MinimizeResult a = minimize_interaction({1.0, 2.0, 0.5}, p, 10, 1234);
        const MinimizeResult b = minimize_interaction({1.0, 2.0, 0.5}, p, 10, 1234);
        bool det = a.energy == b.energy;
        for (int i = 0; i < 3; ++i)
            det = det && a.config.positions[i].x == b.config.positions[i].x &&
                  a.config.positions[i].y == b.config.positions[i].y &&
                  a.config.positions[i].z == b.config.positions[i].z;
        ok = ok && det;
        detail += std::string("determinism ") + (det ? "ok" : "bad");
    }

    report(9, "gradients, symmetry, partitions, determinism", ok, detail);
}

}  // namespace

int main() {
    const GreenEvaluator green;
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6(green);
    criterion7(green);
    criterion8(green);
    criterion9();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
