#pragma once

#include <array>
#include <cmath>

namespace nsfem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Column-major 2x2 matrix [a c; b d].
struct Mat2 {
    double a = 0, b = 0, c = 0, d = 0;

    static Mat2 from_columns(const Vec2& c0, const Vec2& c1) {
        return {c0.x, c0.y, c1.x, c1.y};
    }
    double det() const { return a * d - b * c; }
    Vec2 apply(const Vec2& v) const { return {a * v.x + c * v.y, b * v.x + d * v.y}; }
    Vec2 apply_transposed(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 inverse() const {
        const double j = det();
        return {d / j, -b / j, -c / j, a / j};
    }
};

using Bary = std::array<double, 3>;

} // namespace nsfem
