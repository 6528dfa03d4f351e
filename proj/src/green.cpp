#include "droplab/green.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "droplab/errors.hpp"

namespace droplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;
}  // namespace

GreenEvaluator::GreenEvaluator(GreenParams params) : params_(params) {
    if (!(params_.ewald_alpha > 0.0)) throw config_error("ewald_alpha must be positive");
    if (params_.real_cutoff < 1 || params_.fourier_cutoff < 1)
        throw config_error("Ewald cutoffs must be at least 1");
    if (!(params_.tolerance > 0.0)) throw config_error("tolerance must be positive");
    kappa_ = std::sqrt(params_.ewald_alpha);

    // Truncation estimates: an omitted real-space image has a lattice
    // component of magnitude >= real_cutoff + 1, so it sits at distance
    // >= real_cutoff + 1 - sqrt(3)/2 from any canonical x; the omitted
    // reciprocal shell starts at |k| = fourier_cutoff + 1.
    const double rmin = params_.real_cutoff + 1 - 0.87;
    const double nshell = 27.0 * rmin * rmin;
    const double real_tail = nshell * std::erfc(kappa_ * rmin) / (kFourPi * rmin);
    const int kc = params_.fourier_cutoff + 1;
    const double four_tail = 27.0 * static_cast<double>(kc) * kc *
                             std::exp(-kPi * kPi * kc * kc / params_.ewald_alpha) /
                             (4.0 * kPi * kPi * kc * kc);
    if (real_tail + four_tail > params_.tolerance) {
        char est[32];
        std::snprintf(est, sizeof est, "%.3g", real_tail + four_tail);
        throw numeric_error(std::string("Ewald cutoffs too small for requested tolerance "
                                        "(tail estimate ") + est + ")");
    }

    const int K = params_.fourier_cutoff;
    for (int kx = -K; kx <= K; ++kx)
        for (int ky = -K; ky <= K; ++ky)
            for (int kz = -K; kz <= K; ++kz) {
                const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
                if (k2 == 0.0) continue;
                modes_.push_back({double(kx), double(ky), double(kz),
                                  std::exp(-kPi * kPi * k2 / params_.ewald_alpha) /
                                      (4.0 * kPi * kPi * k2)});
            }

    // g(0) = lim G(x) - 1/(4π|x|): drop the n = 0 real-space image and add the
    // -κ/(2π^{3/2}) limit of erfc(κr)/(4πr) - 1/(4πr).
    double s = 0.0;
    const int R = params_.real_cutoff;
    for (int i = -R; i <= R; ++i)
        for (int j = -R; j <= R; ++j)
            for (int k = -R; k <= R; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                const double r = std::sqrt(double(i) * i + double(j) * j + double(k) * k);
                s += std::erfc(kappa_ * r) / (kFourPi * r);
            }
    for (const Mode& m : modes_) s += m.coef;
    g0_ = s - 1.0 / (4.0 * params_.ewald_alpha) - kappa_ / (2.0 * std::pow(kPi, 1.5));
}

double GreenEvaluator::green_raw(const Vec3& x) const {
    double s = 0.0;
    const int R = params_.real_cutoff;
    for (int i = -R; i <= R; ++i)
        for (int j = -R; j <= R; ++j)
            for (int k = -R; k <= R; ++k) {
                const Vec3 d{x.x + i, x.y + j, x.z + k};
                const double r = norm(d);
                s += std::erfc(kappa_ * r) / (kFourPi * r);
            }
    const double twopi = 2.0 * kPi;
    for (const Mode& m : modes_)
        s += m.coef * std::cos(twopi * (m.kx * x.x + m.ky * x.y + m.kz * x.z));
    return s - 1.0 / (4.0 * params_.ewald_alpha);
}

double GreenEvaluator::green(const TorusPoint& x) const {
    if (x == TorusPoint{})
        throw std::invalid_argument("green: x = 0 is the singular point");
    return green_raw(x.vec());
}

double GreenEvaluator::regular_raw(const Vec3& x) const {
    const double d = torus_distance(TorusPoint{x}, TorusPoint{});
    if (d == 0.0) return g0_;
    return green_raw(TorusPoint{x}.vec()) - 1.0 / (kFourPi * d);
}

double GreenEvaluator::regular_part(const TorusPoint& x) const {
    const double d = torus_distance(x, TorusPoint{});
    if (d >= 0.375)
        throw std::invalid_argument("regular_part: point outside B_{3/8}(0)");
    return regular_raw(x.vec());
}

GreenEvaluator::PairEnergy GreenEvaluator::ball_pair_coulomb(double m1, double r1,
                                                             const TorusPoint& c1, double m2,
                                                             double r2,
                                                             const TorusPoint& c2) const {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(r1 > 0.0) || !(r2 > 0.0))
        throw std::invalid_argument("ball_pair_coulomb: masses and radii must be positive");
    const double d = torus_distance(c1, c2);
    if (d <= r1 + r2)
        throw std::invalid_argument("ball_pair_coulomb: balls overlap under minimal image");

    PairEnergy out{};
    out.newtonian = m1 * m2 / (kFourPi * d);
    const Vec3 dx = min_image(c1, c2);
    out.periodic = m1 * m2 * regular_raw(dx);

    // ‖D²g‖ estimate by axis-aligned central differences of the regular part.
    const double h = 1e-3;
    double d2max = 0.0;
    const double gc = regular_raw(dx);
    const Vec3 axes[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
    for (const Vec3& e : axes) {
        const double d2 = std::abs(regular_raw(dx + e) - 2.0 * gc + regular_raw(dx - e)) / (h * h);
        d2max = std::max(d2max, d2);
    }
    out.error_bound = m1 * m2 * (r1 * r1 + r2 * r2) * d2max;
    return out;
}

double GreenEvaluator::ball_self_coulomb(double m, double r) {
    if (!(m > 0.0) || !(r > 0.0))
        throw std::invalid_argument("ball_self_coulomb: mass and radius must be positive");
    const double rho0 = 3.0 * m / (kFourPi * r * r * r);
    return rho0 * rho0 * (8.0 * kPi / 15.0) * std::pow(r, 5);
}

}  // namespace droplab
