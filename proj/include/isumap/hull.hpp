#ifndef ISUMAP_HULL_HPP
#define ISUMAP_HULL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "isumap/core.hpp"

namespace isumap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

// twice the signed area of triangle (o, a, b); > 0 when b lies left of o->a
inline double turn(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

// Convex hull by monotone chain, counterclockwise, collinear non-corner points
// dropped. Degenerate inputs collapse: one vertex when all points coincide,
// two when they are collinear.
inline std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
    if (pts.empty()) throw InvalidInput("convex_hull_2d: empty point set");
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n == 1) return pts;
    std::vector<Point2> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && detail::turn(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && detail::turn(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);  // last vertex repeats the first
    return h;
}

struct HullDistance {
    bool inside = false;
    double d = 0.0;     // distance to the hull boundary (inside or out)
    Point2 closest{};   // nearest boundary point
};

// Distance from a point to the boundary of a convex polygon, plus containment.
// Boundary points count as inside. A one-vertex hull is a point, a two-vertex
// hull a segment; for those "inside" means lying exactly on it.
inline HullDistance point_hull_distance(const Point2& p, const std::vector<Point2>& hull) {
    if (hull.empty()) throw InvalidInput("point_hull_distance: empty hull");
    HullDistance out;
    const std::size_t m = hull.size();
    if (m == 1) {
        out.closest = hull[0];
        out.d = std::hypot(p.x - hull[0].x, p.y - hull[0].y);
        out.inside = (out.d == 0.0);
        return out;
    }
    const std::size_t edges = (m == 2) ? 1 : m;
    double best = kInf;
    for (std::size_t e = 0; e < edges; ++e) {
        const Point2& a = hull[e];
        const Point2& b = hull[(e + 1) % m];
        double vx = b.x - a.x, vy = b.y - a.y;
        double wx = p.x - a.x, wy = p.y - a.y;
        double vv = vx * vx + vy * vy;
        double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
        Point2 q{a.x + t * vx, a.y + t * vy};
        double d = std::hypot(p.x - q.x, p.y - q.y);
        if (d < best) {
            best = d;
            out.closest = q;
        }
    }
    out.d = best;
    if (m >= 3) {
        out.inside = true;
        for (std::size_t e = 0; e < m; ++e)
            if (detail::turn(hull[e], hull[(e + 1) % m], p) < 0.0) {
                out.inside = false;
                break;
            }
    } else {
        out.inside = (best == 0.0);
    }
    return out;
}

}  // namespace isumap

#endif
