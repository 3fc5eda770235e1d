#pragma once
#include <cmath>

namespace bmoext {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }

    /// Rotate by -90 degrees; maps an inward normal to the matching tangent.
    constexpr Vec2 rot_cw() const { return {y, -x}; }
};

inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct Rect {
    double xmin{0}, ymin{0}, xmax{0}, ymax{0};

    constexpr double width() const { return xmax - xmin; }
    constexpr double height() const { return ymax - ymin; }
    double diagonal() const { return std::hypot(width(), height()); }
    // Windows are treated half-open: [xmin,xmax) x [ymin,ymax).
    constexpr bool contains(Vec2 p) const {
        return p.x >= xmin && p.x < xmax && p.y >= ymin && p.y < ymax;
    }
    constexpr Rect inflated(double m) const {
        return {xmin - m, ymin - m, xmax + m, ymax + m};
    }
};

}  // namespace bmoext
