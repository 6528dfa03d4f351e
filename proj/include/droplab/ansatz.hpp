#pragma once
#include <string>

#include "droplab/green.hpp"
#include "droplab/interaction.hpp"

namespace droplab {

// Spherical-droplet test configuration: n uniform balls of mass m^i and
// radius η r_i, r_i = (3 m^i / 4π)^{1/3}, centered at δ p_i on the torus.
struct AnsatzSpec {
    double eta = 1e-3;
    double delta = 0.1;
    DropletConfig config;       // rescaled positions p_i and masses
    ConfinementProfile profile;
    int quad_order = 16;        // starting order; doubled until converged

    // invariant checks: disjoint supports inside B_{1/4}, η r_max small
    // against the separation scale
    void validate() const;
};

struct EnergyBreakdown {
    double eta = 0.0;
    double delta = 0.0;
    double perimeter_term = 0.0;           // Σ 4π r_i², η-independent
    double nonlocal_self_newtonian = 0.0;  // Σ (8π/15) r_i⁵, η-independent
    double nonlocal_self_regular = 0.0;    // η g(0) Σ (m^i)²
    double nonlocal_cross_newtonian = 0.0; // η Σ_{i≠j} m^i m^j / (4π d_ij)
    double nonlocal_cross_regular = 0.0;   // η Σ_{i≠j} m^i m^j g(δ(p_i-p_j))
    double confinement_term = 0.0;         // -Σ m^i · (ball average of ρ)
    double regular_error_bound = 0.0;      // curvature remainder of the g terms
    double total = 0.0;                    // exact sum of the components

    static std::string csv_header();
    std::string csv_row(double residual) const;
};

EnergyBreakdown evaluate_ansatz(const AnsatzSpec& spec, const GreenEvaluator& green);

// total - [Σ e0_ball(m^i) - M ρ_max + η^σ F(p, profile)],
// σ = 2/3 (quadratic) or p/(p+1) (power law).
double expansion_residual(const AnsatzSpec& spec, const EnergyBreakdown& breakdown);

// Separation-scale exponent σ of the interaction term: 2/3 or p/(p+1).
double interaction_scale_exponent(const ConfinementProfile& profile);

// δ rule of the droplet regime: η^{1/3} (quadratic) or η^{1/(p+1)} (power law).
double delta_rule(double eta, const ConfinementProfile& profile);

// Minimizer of the two-term dilation model η R/δ + δ^s Q for the given shape.
double optimal_delta_model(double eta, const DropletConfig& config,
                           const ConfinementProfile& profile);

}  // namespace droplab
