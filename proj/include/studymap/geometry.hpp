#pragma once

#include <cmath>

namespace studymap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Perpendicular distance from p to the infinite line through a and b; the
/// plain distance to a when a == b.
inline double distance_to_line(Point2 p, Point2 a, Point2 b) {
    const double len = distance(a, b);
    if (len == 0.0) return distance(p, a);
    return std::abs((b.x - a.x) * (a.y - p.y) - (a.x - p.x) * (b.y - a.y)) / len;
}

}  // namespace studymap
