#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace twocenter {

struct EnclosingBall {
    Point3 center;
    double radius = 0.0;
    std::vector<int> support; // <= 4 input indices determining the ball
};

namespace detail_mb {

// Smallest ball with all given points on its boundary (<= 4 points).
// Degenerate configurations fall back to the smallest determined subset.
inline std::optional<Ball> ball_on_boundary(const std::vector<Point3>& q) {
    switch (q.size()) {
        case 0: return std::nullopt;
        case 1: return Ball(q[0], 0.0);
        case 2: {
            Point3 c = (q[0] + q[1]) * 0.5;
            return Ball(c, dist(q[0], q[1]) * 0.5);
        }
        case 3: {
            Vec3 u = q[1] - q[0], v = q[2] - q[0];
            Vec3 w = cross(u, v);
            double w2 = norm2(w);
            double scale = std::max(norm2(u), norm2(v));
            if (w2 <= 1e-24 * scale * scale) return std::nullopt; // collinear
            Point3 c = q[0] + (cross(w, u) * norm2(v) + cross(v, w) * norm2(u)) / (2.0 * w2);
            return Ball(c, dist(c, q[0]));
        }
        case 4: {
            Vec3 r1 = q[1] - q[0], r2 = q[2] - q[0], r3 = q[3] - q[0];
            double det = dot(r1, cross(r2, r3));
            double scale = std::sqrt(norm2(r1) * norm2(r2) * norm2(r3));
            if (std::abs(det) <= 1e-12 * std::max(scale, 1e-300)) return std::nullopt; // coplanar
            double b1 = 0.5 * norm2(r1), b2 = 0.5 * norm2(r2), b3 = 0.5 * norm2(r3);
            Vec3 c_rel = (cross(r2, r3) * b1 + cross(r3, r1) * b2 + cross(r1, r2) * b3) / det;
            Point3 c = q[0] + c_rel;
            return Ball(c, dist(c, q[0]));
        }
        default: return std::nullopt;
    }
}

inline bool in_ball(const Ball& b, const Point3& p, double slack) {
    return dist2(p, b.center) <= b.radius * b.radius + slack;
}

} // namespace detail_mb

// Exact smallest enclosing ball of at most four points (exhaustive over
// boundary subsets).  Shared by the Welzl bases and candidate_radii.
inline Ball seb_of_upto4(const std::vector<Point3>& pts) {
    if (pts.empty()) throw EmptyInput{};
    double scale2 = 0.0;
    for (auto& p : pts)
        for (auto& q : pts) scale2 = std::max(scale2, dist2(p, q));
    double slack = 1e-12 * std::max(scale2, 1.0);
    Ball best;
    bool have = false;
    int n = static_cast<int>(pts.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<Point3> sub;
        for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) sub.push_back(pts[i]);
        auto b = detail_mb::ball_on_boundary(sub);
        if (!b) continue;
        bool ok = true;
        for (auto& p : pts)
            if (!detail_mb::in_ball(*b, p, slack)) { ok = false; break; }
        if (ok && (!have || b->radius < best.radius)) { best = *b; have = true; }
    }
    if (!have) throw GeometryError("seb_of_upto4: no valid ball (degenerate input)");
    return best;
}

// Randomized move-to-front Welzl, deterministic for a fixed seed.
inline EnclosingBall smallest_enclosing_ball(const std::vector<Point3>& points,
                                             std::uint64_t seed = 0x5eb5eb) {
    if (points.empty()) throw EmptyInput{};
    int n = static_cast<int>(points.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0));
    rng.shuffle(order);

    double scale2 = 1e-300;
    for (auto& p : points) scale2 = std::max(scale2, dist2(p, points[0]));
    double slack = 1e-12 * std::max(scale2, 1.0);

    std::vector<Point3> boundary;

    // Classic recursion: prefix [0, end) with the current boundary set.
    auto mtf = [&](auto&& self, int end) -> Ball {
        Ball ball;
        ball.radius = -1.0;
        bool valid = false;
        if (auto b = detail_mb::ball_on_boundary(boundary)) {
            ball = *b;
            valid = true;
        } else if (boundary.size() >= 3) {
            // Degenerate boundary set; fall back to its plain enclosing ball.
            ball = seb_of_upto4(boundary);
            valid = true;
        }
        if (boundary.size() == 4) return ball;
        for (int i = 0; i < end; ++i) {
            const Point3& p = points[order[i]];
            if (valid && detail_mb::in_ball(ball, p, slack)) continue;
            boundary.push_back(p);
            ball = self(self, i);
            valid = true;
            boundary.pop_back();
            // move-to-front
            int id = order[i];
            for (int j = i; j > 0; --j) order[j] = order[j - 1];
            order[0] = id;
        }
        return ball;
    };
    Ball ball = mtf(mtf, n);

    EnclosingBall out;
    out.center = ball.center;
    out.radius = std::max(0.0, ball.radius);

    // Support: smallest subset of boundary points reproducing the ball.
    double btol = 1e-7 * std::sqrt(std::max(scale2, 1.0)) + 1e-12;
    std::vector<int> on_boundary;
    for (int i = 0; i < n && static_cast<int>(on_boundary.size()) < 12; ++i)
        if (std::abs(dist(points[i], ball.center) - ball.radius) <= btol) on_boundary.push_back(i);
    int m = static_cast<int>(on_boundary.size());
    for (int k = 1; k <= std::min(4, m) && out.support.empty(); ++k) {
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            std::vector<Point3> sub;
            for (int i : comb) sub.push_back(points[on_boundary[i]]);
            auto b = detail_mb::ball_on_boundary(sub);
            if (b && std::abs(b->radius - ball.radius) <= btol && dist(b->center, ball.center) <= btol) {
                for (int i : comb) out.support.push_back(on_boundary[i]);
                break;
            }
            int j = k - 1;
            while (j >= 0 && comb[j] == m - k + j) --j;
            if (j < 0) break;
            ++comb[j];
            for (int l = j + 1; l < k; ++l) comb[l] = comb[l - 1] + 1;
        }
    }
    if (out.support.empty() && m > 0) out.support.assign(on_boundary.begin(),
                                                         on_boundary.begin() + std::min(m, 4));
    return out;
}

inline EnclosingBall smallest_enclosing_ball_of(const std::vector<Point3>& points,
                                                const std::vector<int>& ids,
                                                std::uint64_t seed = 0x5eb5eb) {
    std::vector<Point3> sub;
    sub.reserve(ids.size());
    for (int i : ids) sub.push_back(points[i]);
    return smallest_enclosing_ball(sub, seed);
}

// ======================================================================
// Convex feasibility oracle for intersections of congruent balls:
//       intersection of B_r(c_i) nonempty  <=>  SEB(centers).radius <= r
// ======================================================================

enum class IntersectionStatus { Empty, Degenerate, FullDim, Unconstrained };

struct BallsStatus {
    IntersectionStatus status = IntersectionStatus::Unconstrained;
    Point3 witness; // common point (SEB center) when nonempty
};

inline BallsStatus balls_intersection_status(const std::vector<Point3>& centers, double r,
                                             const Tolerance& tol = default_tolerance(),
                                             std::uint64_t seed = 0x5eb5eb) {
    BallsStatus out;
    if (centers.empty()) {
        out.status = IntersectionStatus::Unconstrained;
        return out;
    }
    if (r <= 0.0) throw GeometryError("balls_intersection_status needs r > 0");
    EnclosingBall seb = smallest_enclosing_ball(centers, seed);
    out.witness = seb.center;
    double margin = tol.eps(r, seb.radius);
    if (seb.radius > r + margin) out.status = IntersectionStatus::Empty;
    else if (seb.radius >= r - margin) out.status = IntersectionStatus::Degenerate;
    else out.status = IntersectionStatus::FullDim;
    return out;
}

// Sorted, deduplicated SEB radii of all subsets of size 1..4.  The 2-center
// optimum is always one of these values.
inline std::vector<double> candidate_radii(const std::vector<Point3>& points,
                                           const Tolerance& tol = default_tolerance()) {
    if (points.empty()) throw EmptyInput{};
    int n = static_cast<int>(points.size());
    std::vector<double> radii;
    std::vector<int> comb;
    auto emit = [&](const std::vector<int>& ids) {
        std::vector<Point3> sub;
        for (int i : ids) sub.push_back(points[i]);
        radii.push_back(seb_of_upto4(sub).radius);
    };
    for (int a = 0; a < n; ++a) {
        emit({a});
        for (int b = a + 1; b < n; ++b) {
            emit({a, b});
            for (int c = b + 1; c < n; ++c) {
                emit({a, b, c});
                for (int d = c + 1; d < n; ++d) emit({a, b, c, d});
            }
        }
    }
    std::sort(radii.begin(), radii.end());
    std::vector<double> out;
    for (double r : radii)
        if (out.empty() || !tol.close(out.back(), r)) out.push_back(r);
    return out;
}

} // namespace twocenter
