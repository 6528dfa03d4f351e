#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "droplab/torus.hpp"

namespace droplab {

// Symmetric 3x3 matrix, row-major storage of the upper triangle expanded.
struct Mat3Sym {
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};
    static Mat3Sym identity() { return {}; }
    static Mat3Sym diagonal(double d1, double d2, double d3) {
        return {{d1, 0, 0, 0, d2, 0, 0, 0, d3}};
    }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }
    Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }
    bool is_diagonal() const;
    bool is_positive_definite() const;  // symmetric input assumed; Sylvester minors
};

enum class ProfileKind { quadratic, power_law };

// How the torus-periodic density ρ extends the local model q(x):
//   torus_sin:   ρ = ρ_max - Σ_i H_ii sin²(π α_i)/π²  (smooth, periodic,
//                requires diagonal H; Taylor gives q(x) = Σ H_ii α_i² at 0)
//   pure_local:  ρ = ρ_max - q(x̃) χ(|x̃|) with x̃ the minimal image and χ a
//                smooth cutoff equal to 1 on B_{1/4}
enum class DensityMode { torus_sin, pure_local };

// Local confinement model q(x) with q(0) = 0, q > 0 elsewhere:
// quadratic q(x) = xᵀHx (H symmetric positive definite), or the degenerate
// power law q(x) = ρ1 |x|^p with p > 2.
struct ConfinementProfile {
    ProfileKind kind = ProfileKind::quadratic;
    Mat3Sym hessian = Mat3Sym::identity();  // quadratic kind
    double rho1 = 1.0;                      // power_law coefficient
    double exponent = 4.0;                  // power_law exponent p > 2
    double rho_max = 1.0;
    DensityMode density = DensityMode::pure_local;

    void validate() const;

    double q(const Vec3& x) const;
    Vec3 grad_q(const Vec3& x) const;
    double rho(const TorusPoint& x) const;
    // homogeneity degree s of q: 2 for quadratic, p for power_law
    double homogeneity() const { return kind == ProfileKind::quadratic ? 2.0 : exponent; }
};

// Masses and rescaled droplet centers; F is +inf at coincident positions,
// so the type rejects them.
struct DropletConfig {
    std::vector<double> masses;
    std::vector<Vec3> positions;

    double total_mass() const;
    double min_pair_distance() const;  // +inf for n = 1
    void validate() const;             // positive masses, distinct positions
};

double interaction_energy(const DropletConfig& config, const ConfinementProfile& profile);

// ∇_{x_k} F; repulsion carries a factor 2 from the ordered-pair sum,
// confinement is the single sum m^k ∇q(x_k).
std::vector<Vec3> interaction_gradient(const DropletConfig& config,
                                       const ConfinementProfile& profile);

struct MinimizeResult {
    DropletConfig config;
    double energy = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
    int best_restart = -1;
    // energies of distinct local minima found, clustered within 1e-6, ascending
    std::vector<double> distinct_minima;
};

// Multi-start gradient descent with Armijo backtracking; deterministic given
// seed.  An optional warm start is run before the random restarts.
MinimizeResult minimize_interaction(const std::vector<double>& masses,
                                    const ConfinementProfile& profile, int restarts,
                                    std::uint64_t seed,
                                    const std::optional<DropletConfig>& warm_start = std::nullopt);

struct VirialReport {
    double repulsion = 0.0;    // ordered-pair Coulomb sum R
    double confinement = 0.0;  // Σ m^i q(x_i) = Q
    double residual = 0.0;     // |R - s Q| / (R + Q), 0 when R + Q = 0
};

// Dilation stationarity R = s·Q at critical points (degrees -1 and s).
VirialReport virial_check(const DropletConfig& config, const ConfinementProfile& profile);

}  // namespace droplab
