#pragma once
#include <array>
#include <cmath>
#include <stdexcept>

namespace droplab {

struct Vec3 {
    double x{}, y{}, z{};
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Point of the flat unit torus [-1/2,1/2)^3 / Z^3.  Coordinates are kept in
// canonical form by every constructor and arithmetic path; 0.5 maps to -0.5.
class TorusPoint {
public:
    TorusPoint() = default;
    TorusPoint(double a, double b, double c) : c_{wrap1(a), wrap1(b), wrap1(c)} {}
    explicit TorusPoint(const Vec3& v) : TorusPoint(v.x, v.y, v.z) {}

    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Vec3 vec() const { return {c_[0], c_[1], c_[2]}; }

    TorusPoint operator+(const TorusPoint& o) const {
        return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2]};
    }
    TorusPoint operator-(const TorusPoint& o) const {
        return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2]};
    }
    bool operator==(const TorusPoint& o) const {
        return c_[0] == o.c_[0] && c_[1] == o.c_[1] && c_[2] == o.c_[2];
    }

    static double wrap1(double c) {
        if (!std::isfinite(c)) throw std::invalid_argument("torus coordinate must be finite");
        double w = c - std::floor(c + 0.5);
        if (w >= 0.5) w -= 1.0;
        if (w < -0.5) w += 1.0;
        return w;
    }

private:
    std::array<double, 3> c_{0.0, 0.0, 0.0};
};

inline TorusPoint wrap(double a, double b, double c) { return {a, b, c}; }
inline TorusPoint wrap(const Vec3& v) { return TorusPoint{v}; }

// Representative of a - b with smallest Euclidean norm.  The 27 shifts with
// components in {-1,0,1} are enumerated so the boundary |c| = 1/2 is handled
// exactly rather than by rounding.
inline Vec3 min_image(const TorusPoint& a, const TorusPoint& b) {
    const TorusPoint d = a - b;
    Vec3 best = d.vec();
    double best2 = dot(best, best);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                const Vec3 c{d[0] + i, d[1] + j, d[2] + k};
                const double n2 = dot(c, c);
                if (n2 < best2) { best2 = n2; best = c; }
            }
    return best;
}

inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    return norm(min_image(a, b));
}

}  // namespace droplab
