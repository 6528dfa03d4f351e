#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "droplab/ansatz.hpp"

namespace droplab {

enum class DeltaMode { fixed_delta_rule, optimize_delta };

struct SweepPlan {
    std::vector<double> eta_values;  // strictly decreasing, min >= 1e-6
    DeltaMode mode = DeltaMode::fixed_delta_rule;
    ConfinementProfile profile;
    std::vector<double> masses;
    int restarts = 32;
    std::uint64_t seed = 0;
    int quad_order = 16;

    void validate() const;
    std::string canonical() const;   // canonical key=value serialization
    std::string hash() const;        // FNV-1a over canonical(), hex
};

struct SweepRow {
    double eta = 0.0;
    double delta_star = 0.0;
    double f_value = 0.0;        // interaction energy at the optimized positions
    double energy_excess = 0.0;  // total - (Σ e0_ball(m^i) - M ρ_max)
    double residual = 0.0;       // total - second-order prediction
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> skipped;  // "eta=...: reason" for invariant violations
};

SweepResult run_sweep(const SweepPlan& plan, const GreenEvaluator& green);

struct FitResult {
    double exponent = 0.0;   // slope on log-log axes
    double intercept = 0.0;
    double r_squared = 0.0;
    double std_error = 0.0;  // standard error of the slope
    std::vector<double> residuals;
    bool dropped_largest = false;  // pre-asymptotic point dropped (at most once)
};

// Least-squares line on (log x, log y); x, y must be positive, >= 3 points.
FitResult fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

// fit_exponent plus the drop rule: when r² < 0.999 and >= 4 points remain,
// drop the largest-x point once and refit.
FitResult fit_exponent_with_drop(std::vector<double> x, std::vector<double> y);

std::string sweep_csv(const SweepPlan& plan, const SweepResult& result);
std::string fit_summary(const std::string& label, const FitResult& fit);

}  // namespace droplab
