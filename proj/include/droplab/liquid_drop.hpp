#pragma once
#include <vector>

namespace droplab {

// Coefficients of the ball-restricted liquid-drop energy
//   e0(m) = a m^{2/3} + b m^{5/3},
// a = 3(4π/3)^{1/3} (perimeter), b = (3/4π)^{5/3}(8π/15) (Coulomb self term).
// The pair satisfies a/(5b) = 2π exactly.
struct BallModel {
    double perimeter_coeff;  // a
    double coulomb_coeff;    // b
    BallModel();
};

double e0_ball(double m);
double e0_ball_prime(double m);
double e0_ball_second_derivative(double m);

// Root of e0''; equals 2π analytically.
double concavity_threshold();

// Mass where the equal binary split first beats the single ball:
// 10π (2^{1/3}-1)/(1-2^{-2/3}) ≈ 22.07.
double binary_split_threshold();

struct MassPartition {
    std::vector<double> masses;  // all > 0, descending
    double total;                // Σ m^i, checked against the request
    double objective;            // Σ e0_ball(m^i)
    double kkt_residual;         // relative spread of e0' over interior masses
};

// Minimize Σ e0_ball(m^i) subject to Σ m^i = M, 0 < m^i <= admissible_cap,
// over droplet counts n in {1..n_max}.  Ties break toward smaller n.
// grid controls the scan resolution of the interior 1-D family before local
// refinement; results must be invariant under doubling it.
MassPartition optimal_partition(double M, int n_max, double admissible_cap, int grid = 512);

}  // namespace droplab
