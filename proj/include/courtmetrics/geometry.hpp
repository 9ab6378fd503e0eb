#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace courtmetrics {

/// 2D point / vector. Used for both image coordinates (pixels, origin
/// top-left) and court-plane coordinates (meters).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend Vec2 operator*(double s, Vec2 a) { return a * s; }
    friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Area centroid of a simple polygon (falls back to the vertex mean for
/// degenerate, near-zero-area inputs).
Vec2 polygon_centroid(std::span<const Vec2> polygon);

/// Even-odd rule point-in-polygon test. Points on an edge count as inside.
bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);

/// Shortest distance from p to the polygon outline.
double distance_to_polygon_edges(Vec2 p, std::span<const Vec2> polygon);

/// True when every cross product of consecutive edges has the same sign
/// (collinear runs allowed). Implies the polygon is simple.
bool polygon_is_convex(std::span<const Vec2> polygon);

/// Distance from point p to the segment [a, b].
double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

}  // namespace courtmetrics
