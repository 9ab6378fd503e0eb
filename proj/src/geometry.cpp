#include "courtmetrics/geometry.hpp"

#include <algorithm>
#include <limits>

namespace courtmetrics {

Vec2 polygon_centroid(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n == 0) return {};
    double area2 = 0.0;
    Vec2 acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        const double w = cross(a, b);
        area2 += w;
        acc = acc + (a + b) * w;
    }
    if (std::abs(area2) < 1e-12) {
        Vec2 mean{0.0, 0.0};
        for (const Vec2& p : polygon) mean = mean + p;
        return mean / static_cast<double>(n);
    }
    return acc / (3.0 * area2);
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    // Edge hits count as inside.
    for (std::size_t i = 0; i < n; ++i) {
        if (distance_to_segment(p, polygon[i], polygon[(i + 1) % n]) < 1e-12)
            return true;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[j];
        const bool crosses = (a.y > p.y) != (b.y > p.y);
        if (crosses && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            inside = !inside;
    }
    return inside;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double distance_to_polygon_edges(Vec2 p, std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, distance_to_segment(p, polygon[i], polygon[(i + 1) % n]));
    return best;
}

bool polygon_is_convex(std::span<const Vec2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return false;
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        const Vec2 c = polygon[(i + 2) % n];
        const double z = cross(b - a, c - b);
        if (std::abs(z) < 1e-12) continue;  // collinear run
        const int s = z > 0.0 ? 1 : -1;
        if (sign == 0)
            sign = s;
        else if (s != sign)
            return false;
    }
    return sign != 0;
}

}  // namespace courtmetrics
