#include "droplab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace droplab {

namespace {
constexpr double kPi = 3.14159265358979323846;

GaussRule make_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}
}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

double ball_average(const std::function<double(const Vec3&)>& f, const Vec3& center,
                    double radius, int order) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball_average: radius must be positive");
    const GaussRule& g = gauss_legendre(order);
    const int nphi = 2 * order;
    double acc = 0.0;
    for (int ir = 0; ir < order; ++ir) {
        const double r = 0.5 * radius * (g.nodes[static_cast<std::size_t>(ir)] + 1.0);
        const double wr = 0.5 * radius * g.weights[static_cast<std::size_t>(ir)] * r * r;
        for (int iu = 0; iu < order; ++iu) {
            const double u = g.nodes[static_cast<std::size_t>(iu)];  // cos(theta)
            const double wu = g.weights[static_cast<std::size_t>(iu)];
            const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
            for (int ip = 0; ip < nphi; ++ip) {
                const double phi = 2.0 * kPi * ip / nphi;
                const Vec3 p{center.x + r * su * std::cos(phi),
                             center.y + r * su * std::sin(phi), center.z + r * u};
                acc += wr * wu * (2.0 * kPi / nphi) * f(p);
            }
        }
    }
    const double volume = 4.0 * kPi * radius * radius * radius / 3.0;
    return acc / volume;
}

}  // namespace droplab
