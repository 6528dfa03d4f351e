#pragma once
#include <vector>

#include "droplab/torus.hpp"

namespace droplab {

struct GreenParams {
    double ewald_alpha = 3.14159265358979323846;  // splitting parameter, inverse-length^2
    int real_cutoff = 3;                          // lattice shells in the erfc sum
    int fourier_cutoff = 8;                       // reciprocal shells
    double tolerance = 1e-9;                      // target absolute accuracy of G
};

// Mean-zero periodic Laplace Green's function on the unit torus, -ΔG = δ - 1,
// via Ewald splitting with Gaussian screening:
//
//   G(x) = Σ_n erfc(κ|x+n|)/(4π|x+n|)
//        + Σ_{k≠0} exp(-π²|k|²/α) cos(2π k·x)/(4π²|k|²)  -  1/(4α),   κ = √α.
//
// Decomposes near 0 as G(x) = 1/(4π|x|) + g(x) with g smooth; g(0) is cached
// at construction.
class GreenEvaluator {
public:
    explicit GreenEvaluator(GreenParams params = {});

    double green(const TorusPoint& x) const;  // rejects x = 0

    // Smooth part g(x) = G(x) - 1/(4π d_min(x)); restricted to B_{3/8}(0).
    double regular_part(const TorusPoint& x) const;
    double regular_at_zero() const { return g0_; }

    struct PairEnergy {
        double newtonian;    // m1 m2 / (4π d), exact for disjoint uniform balls
        double periodic;     // m1 m2 g(c1 - c2), center evaluation
        double error_bound;  // O(r² ‖D²g‖) budget of the center approximation
        double total() const { return newtonian + periodic; }
    };

    // Cross Coulomb energy of two disjoint uniform balls under the periodic
    // kernel.  The Newtonian part is exact by Newton's theorem; the regular
    // part is evaluated at the center difference with a recorded error budget.
    PairEnergy ball_pair_coulomb(double m1, double r1, const TorusPoint& c1,
                                 double m2, double r2, const TorusPoint& c2) const;

    // Newtonian self energy ∫∫ ρ0²/(4π|x-y|) of a uniform ball of mass m and
    // radius r: (3m/4πr³)² (8π/15) r⁵.  Density 1, radius 1 gives 8π/15.
    static double ball_self_coulomb(double m, double r);

    const GreenParams& params() const { return params_; }

private:
    double green_raw(const Vec3& x) const;    // Ewald sum at a canonical point
    double regular_raw(const Vec3& x) const;  // no B_{3/8} restriction

    GreenParams params_;
    double kappa_;
    double g0_;
    struct Mode { double kx, ky, kz, coef; };
    std::vector<Mode> modes_;
};

}  // namespace droplab
