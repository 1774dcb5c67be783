#pragma once

// Independent brute-force oracles used by the test suites.  These stay on
// the "enumerate everything" side of every check so they never share a
// search path with the code under test.

#include <twocenter/geometry.hpp>
#include <twocenter/miniball.hpp>

#include <cstdint>
#include <limits>
#include <vector>

namespace oracles {

using namespace twocenter;

// Minimum over all circumballs of <=4-subsets that contain every point.
inline double seb_radius_exhaustive(const std::vector<Point3>& pts) {
    int n = static_cast<int>(pts.size());
    double best = std::numeric_limits<double>::infinity();
    double scale2 = 1.0;
    for (auto& p : pts) scale2 = std::max(scale2, dist2(p, pts[0]));
    double slack = 1e-12 * scale2;
    std::vector<int> ids;
    auto consider = [&](const std::vector<int>& sub) {
        std::vector<Point3> q;
        for (int i : sub) q.push_back(pts[i]);
        auto b = detail_mb::ball_on_boundary(q);
        if (!b) return;
        for (auto& p : pts)
            if (dist2(p, b->center) > b->radius * b->radius + slack) return;
        best = std::min(best, b->radius);
    };
    for (int a = 0; a < n; ++a) {
        consider({a});
        for (int b = a + 1; b < n; ++b) {
            consider({a, b});
            for (int c = b + 1; c < n; ++c) {
                consider({a, b, c});
                for (int d = c + 1; d < n; ++d) consider({a, b, c, d});
            }
        }
    }
    return best;
}

struct TwoCenterOracle {
    double radius = 0.0;
    std::uint32_t mask = 0; // bit i set -> point i on side 1
};

// Exhaustive 2^(n-1) bipartition search; exact for n <= ~20.
inline TwoCenterOracle two_center_exhaustive(const std::vector<Point3>& pts) {
    int n = static_cast<int>(pts.size());
    TwoCenterOracle best;
    best.radius = std::numeric_limits<double>::infinity();
    std::uint32_t total = n >= 1 ? (1u << (n - 1)) : 1u;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        std::vector<Point3> s1, s2;
        for (int i = 0; i < n; ++i)
            (mask & (1u << i)) ? s1.push_back(pts[i]) : s2.push_back(pts[i]);
        double r1 = s1.empty() ? 0.0 : smallest_enclosing_ball(s1).radius;
        double r2 = s2.empty() ? 0.0 : smallest_enclosing_ball(s2).radius;
        double r = std::max(r1, r2);
        if (r < best.radius) {
            best.radius = r;
            best.mask = mask;
        }
    }
    return best;
}

// Direct per-ball z-interval of the vertical line through (x, y).
struct ZInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool empty = false;
};

inline ZInterval vertical_interval(const std::vector<Ball>& balls, double x, double y) {
    ZInterval s;
    for (auto& b : balls) {
        double d2 = (x - b.center.x) * (x - b.center.x) + (y - b.center.y) * (y - b.center.y);
        double h2 = b.radius * b.radius - d2;
        if (h2 < 0.0) {
            s.empty = true;
            return s;
        }
        double h = std::sqrt(h2);
        s.lo = std::max(s.lo, b.center.z - h);
        s.hi = std::min(s.hi, b.center.z + h);
    }
    if (s.lo > s.hi) s.empty = true;
    return s;
}

} // namespace oracles
