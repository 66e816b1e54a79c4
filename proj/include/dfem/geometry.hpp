#pragma once

#include <cmath>

namespace dfem {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

/// Polar angle normalized to [0, 2*pi).
inline double angle_of(Vec2 a) {
    double t = std::atan2(a.y, a.x);
    if (t < 0.0) t += kTwoPi;
    return t;
}

inline double triangle_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * cross(b - a, c - a);
}

/// Distance from p to the closed triangle (zero if p lies inside).
double point_triangle_distance(Vec2 p, Vec2 a, Vec2 b, Vec2 c);

}  // namespace dfem
