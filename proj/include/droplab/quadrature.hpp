#pragma once
#include <functional>
#include <vector>

#include "droplab/torus.hpp"

namespace droplab {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration; cached per order.
const GaussRule& gauss_legendre(int n);

// Average of f over the ball B(center, radius), tensor product rule in
// spherical coordinates: order-n Gauss in radius and cos(theta), 2n-point
// trapezoid in azimuth (exact for trigonometric polynomials).
double ball_average(const std::function<double(const Vec3&)>& f, const Vec3& center,
                    double radius, int order);

}  // namespace droplab
