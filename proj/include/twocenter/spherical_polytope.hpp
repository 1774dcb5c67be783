#pragma once

#include "circle_clip.hpp"
#include "geometry.hpp"
#include "miniball.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

namespace twocenter {

// ======================================================================
// Spherical polytopes: intersections of congruent balls
// ======================================================================

struct PolytopeVertex {
    Point3 pos;
    std::vector<int> balls; // boundary spheres through this vertex
};

struct PolytopeEdge {
    Arc3 arc;
    int ball_a = -1, ball_b = -1;
    bool full_circle = false;
};

struct PolytopeFace {
    int ball = -1;
    std::vector<int> edges;
    int cycles = 0;
    bool full_sphere = false;
};

struct SphericalPolytope {
    double r = 0.0;
    std::vector<Ball> balls;
    std::vector<PolytopeVertex> vertices;
    std::vector<PolytopeEdge> edges;
    std::vector<PolytopeFace> faces;
    bool degenerate = false;
    Point3 degenerate_point;

    bool contains(const Point3& p, const Tolerance& tol = default_tolerance()) const {
        for (auto& b : balls)
            if (!tol.le(dist(p, b.center), b.radius)) return false;
        return true;
    }
};

// Boundary structure of the intersection, or nullopt when it is empty.
// A single-point intersection is returned with the degenerate flag set.
inline std::optional<SphericalPolytope> build_polytope(const std::vector<Ball>& balls,
                                                       const Tolerance& tol = default_tolerance(),
                                                       std::uint64_t seed = 0x5eb5eb) {
    if (balls.empty()) throw GeometryError("build_polytope needs at least one ball");
    double r = balls[0].radius;
    if (r <= 0.0) throw GeometryError("build_polytope needs positive radius");
    for (auto& b : balls)
        if (!tol.close(b.radius, r)) throw MixedRadii{};

    SphericalPolytope out;
    out.r = r;
    out.balls = balls;

    std::vector<Point3> centers;
    for (auto& b : balls) centers.push_back(b.center);
    auto status = balls_intersection_status(centers, r, tol, seed);
    if (status.status == IntersectionStatus::Empty) return std::nullopt;
    if (status.status == IntersectionStatus::Degenerate) {
        out.degenerate = true;
        out.degenerate_point = status.witness;
        PolytopeVertex v;
        v.pos = status.witness;
        for (int i = 0; i < static_cast<int>(balls.size()); ++i)
            if (tol.close(dist(status.witness, balls[i].center), r)) v.balls.push_back(i);
        out.vertices.push_back(std::move(v));
        for (int i : out.vertices[0].balls) {
            PolytopeFace f;
            f.ball = i;
            out.faces.push_back(f);
        }
        return out;
    }

    int k = static_cast<int>(balls.size());
    // Duplicate centers are redundant constraints; only the first matters.
    std::vector<int> active;
    for (int i = 0; i < k; ++i) {
        bool dup = false;
        for (int j : active)
            if (dist(balls[i].center, balls[j].center) <= tol.eps(r)) { dup = true; break; }
        if (!dup) active.push_back(i);
    }

    PointDedup dedup(std::max(1e-9, 64.0 * tol.eps(r)));
    std::vector<std::vector<int>> vertex_balls;
    auto vertex_id = [&](const Point3& p) {
        int before = static_cast<int>(dedup.points.size());
        int id = dedup.insert(p);
        if (id == before) {
            std::vector<int> on;
            for (int l = 0; l < k; ++l)
                if (std::abs(dist(p, balls[l].center) - r) <= 1e4 * tol.eps(r)) on.push_back(l);
            vertex_balls.push_back(std::move(on));
        }
        return id;
    };

    std::vector<std::vector<int>> face_edges(k);
    for (std::size_t ai = 0; ai < active.size(); ++ai)
        for (std::size_t bi = ai + 1; bi < active.size(); ++bi) {
            int i = active[ai], j = active[bi];
            auto isect = sphere_sphere_intersect(balls[i], balls[j], tol);
            if (isect.kind != SphereIntersection::Kind::Circle) continue;
            const Circle3& c = isect.circle;
            auto [e1, e2] = c.frame();
            AngleSet feasible = AngleSet::whole();
            for (int l : active) {
                if (l == i || l == j) continue;
                clip_circle(feasible,
                            CircleConstraint::inside_ball(c.center, c.radius, e1, e2,
                                                          balls[l].center, r));
                if (feasible.is_empty()) break;
            }
            if (feasible.is_empty()) continue;
            if (feasible.full) {
                PolytopeEdge e;
                e.arc = Arc3(c, 0.0, kTwoPi);
                e.ball_a = i;
                e.ball_b = j;
                e.full_circle = true;
                int id = static_cast<int>(out.edges.size());
                out.edges.push_back(std::move(e));
                face_edges[i].push_back(id);
                face_edges[j].push_back(id);
                continue;
            }
            for (auto& [s, len] : feasible.arcs) {
                PolytopeEdge e;
                e.arc = Arc3(c, s, s + len);
                e.ball_a = i;
                e.ball_b = j;
                vertex_id(e.arc.start());
                vertex_id(e.arc.end());
                int id = static_cast<int>(out.edges.size());
                out.edges.push_back(std::move(e));
                face_edges[i].push_back(id);
                face_edges[j].push_back(id);
            }
        }

    for (std::size_t vi = 0; vi < dedup.points.size(); ++vi) {
        PolytopeVertex v;
        v.pos = dedup.points[vi];
        v.balls = vertex_balls[vi];
        out.vertices.push_back(std::move(v));
    }

    // Faces: one per ball with boundary features, or a full sphere when the
    // whole sphere lies inside every other ball.
    for (int i = 0; i < k; ++i) {
        if (std::find(active.begin(), active.end(), i) == active.end()) continue;
        PolytopeFace f;
        f.ball = i;
        f.edges = face_edges[i];
        if (f.edges.empty()) {
            auto [e1, e2] = orthonormal_frame({0, 0, 1});
            Point3 probe = balls[i].center + e1 * r;
            bool inside = true;
            for (int l : active)
                if (l != i && !tol.le(dist(probe, balls[l].center), r)) { inside = false; break; }
            if (!inside) continue;
            f.full_sphere = true;
            f.cycles = 0;
            out.faces.push_back(std::move(f));
            continue;
        }
        // Count boundary cycles by walking endpoint adjacency on this sphere.
        int m = static_cast<int>(f.edges.size());
        std::vector<int> comp(m, -1);
        auto endpoints = [&](int e) -> std::pair<int, int> {
            auto& ed = out.edges[f.edges[e]];
            if (ed.full_circle) return {-1, -1};
            return {dedup.insert(ed.arc.start()), dedup.insert(ed.arc.end())};
        };
        int cycles = 0;
        for (int e = 0; e < m; ++e) {
            if (comp[e] >= 0) continue;
            if (out.edges[f.edges[e]].full_circle) { comp[e] = cycles++; continue; }
            // BFS over shared endpoints.
            std::vector<int> stack{e};
            comp[e] = cycles;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                auto [a, b] = endpoints(cur);
                for (int o = 0; o < m; ++o) {
                    if (comp[o] >= 0 || out.edges[f.edges[o]].full_circle) continue;
                    auto [oa, ob] = endpoints(o);
                    if (oa == a || oa == b || ob == a || ob == b) {
                        comp[o] = cycles;
                        stack.push_back(o);
                    }
                }
            }
            ++cycles;
        }
        f.cycles = cycles;
        out.faces.push_back(std::move(f));
    }
    return out;
}

// ======================================================================
// Vertical extents and two-phase concave feasibility searches
// ======================================================================

namespace detail_sp {

inline double disk_slack(const Ball& b, double x, double y) {
    double dx = x - b.center.x, dy = y - b.center.y;
    return b.radius * b.radius - dx * dx - dy * dy;
}

struct ColumnExtent {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    int lo_ball = -1, hi_ball = -1;
    bool disk_ok = true;
    int miss_ball = -1;
};

template <class BallsT>
inline ColumnExtent vertical_extent(const BallsT& balls, double x, double y) {
    ColumnExtent e;
    for (int i = 0; i < static_cast<int>(balls.size()); ++i) {
        double s = disk_slack(balls[i], x, y);
        if (s < 0.0) {
            e.disk_ok = false;
            e.miss_ball = i;
            return e;
        }
        double h = std::sqrt(s);
        double lo = balls[i].center.z - h, hi = balls[i].center.z + h;
        if (lo > e.lo) { e.lo = lo; e.lo_ball = i; }
        if (hi < e.hi) { e.hi = hi; e.hi_ball = i; }
    }
    return e;
}

// min over balls of the xy-disk slack (concave, finite everywhere)
template <class BallsT>
inline double min_slack(const BallsT& balls, double x, double y, int* arg = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(balls.size()); ++i) {
        double s = disk_slack(balls[i], x, y);
        if (s < best) {
            best = s;
            if (arg) *arg = i;
        }
    }
    return best;
}

// vertical gap: min hi - max lo (concave where all disks hold)
template <class BallsT>
inline double gap(const BallsT& balls, double x, double y) {
    auto e = vertical_extent(balls, x, y);
    if (!e.disk_ok) return -std::numeric_limits<double>::infinity();
    return e.hi - e.lo;
}

template <class F>
inline double ternary_max(F&& f, double lo, double hi, int iters, double* argbest) {
    for (int it = 0; it < iters; ++it) {
        double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b)) lo = a;
        else hi = b;
    }
    double m = 0.5 * (lo + hi);
    if (argbest) *argbest = m;
    return f(m);
}

// Largest t in [lo, hi] with f(t) >= 0, given f concave, f(lo) >= 0.
template <class F>
inline double bisect_down(F&& f, double lo, double hi, int iters = 80) {
    if (f(hi) >= 0.0) return hi;
    for (int it = 0; it < iters; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

struct SearchBox {
    double xlo, xhi, ylo, yhi;
};

template <class BallsT>
inline SearchBox bounding_box(const BallsT& balls) {
    SearchBox b{1e300, -1e300, 1e300, -1e300};
    for (auto& ball : balls) {
        b.xlo = std::min(b.xlo, ball.center.x - ball.radius);
        b.xhi = std::max(b.xhi, ball.center.x + ball.radius);
        b.ylo = std::min(b.ylo, ball.center.y - ball.radius);
        b.yhi = std::max(b.yhi, ball.center.y + ball.radius);
    }
    if (b.xlo > b.xhi) b = {0, 0, 0, 0};
    return b;
}

struct Max2D {
    bool disk_feasible = false;
    double x = 0, y = 0;     // maximizer (of gap when disk_feasible, else of slack)
    double value = 0;        // gap value (or negative slack proxy)
    double slack = 0;        // disk slack at the reported point
};

// Maximize the vertical gap of the family over (x, y), restricted to
// x in [xlo, xhi] when given.  Phase A maximizes the concave disk slack;
// phase B maximizes the concave gap over the disk-feasible region.
template <class BallsT>
inline Max2D maximize_gap(const BallsT& balls, double xlo = 1.0, double xhi = -1.0,
                          int iters = 72) {
    Max2D res;
    if (balls.size() == 0) {
        res.disk_feasible = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }
    SearchBox box = bounding_box(balls);
    if (xlo <= xhi) {
        box.xlo = std::max(box.xlo, xlo);
        box.xhi = std::min(box.xhi, xhi);
        if (box.xlo > box.xhi) {
            res.disk_feasible = false;
            res.x = 0.5 * (xlo + xhi);
            res.value = -std::numeric_limits<double>::infinity();
            res.slack = -1.0;
            return res;
        }
    }
    auto col_slack = [&](double x, double* ybest) {
        return ternary_max([&](double y) { return min_slack(balls, x, y); }, box.ylo, box.yhi,
                           iters, ybest);
    };
    double xD;
    double D = ternary_max([&](double x) { return col_slack(x, nullptr); }, box.xlo, box.xhi,
                           iters, &xD);
    double yD;
    D = col_slack(xD, &yD);
    res.slack = D;
    if (D < 0.0) {
        res.disk_feasible = false;
        res.x = xD;
        res.y = yD;
        res.value = -std::numeric_limits<double>::infinity();
        return res;
    }
    res.disk_feasible = true;
    // x-range where some column stays disk-feasible.
    double xr = bisect_down([&](double x) { return col_slack(x, nullptr); }, xD, box.xhi);
    double xl = -bisect_down([&](double x) { return col_slack(-x, nullptr); }, -xD, -box.xlo);
    double shrink = 1e-12 * (1.0 + xr - xl);
    xl += shrink;
    xr -= shrink;
    if (xr < xl) xr = xl = xD;
    auto col_gap = [&](double x, double* ybest) {
        double yc;
        double s = col_slack(x, &yc);
        if (s < 0.0) return -1e300 + 0.0;
        double yhiF = bisect_down([&](double y) { return min_slack(balls, x, y); }, yc, box.yhi);
        double yloF = -bisect_down([&](double y) { return min_slack(balls, x, -y); }, -yc, -box.ylo);
        double pad = 1e-13 * (1.0 + yhiF - yloF);
        return ternary_max([&](double y) { return gap(balls, x, y); }, yloF + pad, yhiF - pad,
                           iters, ybest);
    };
    double xg;
    ternary_max([&](double x) { return col_gap(x, nullptr); }, xl, xr, iters, &xg);
    double yg;
    double g = col_gap(xg, &yg);
    res.x = xg;
    res.y = yg;
    res.value = g;
    res.slack = min_slack(balls, xg, yg);
    return res;
}

// Column variant: maximize the gap over y for fixed x.
template <class BallsT>
inline Max2D maximize_gap_on_column(const BallsT& balls, double x0, int iters = 72) {
    Max2D res;
    res.x = x0;
    if (balls.size() == 0) {
        res.disk_feasible = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }
    SearchBox box = bounding_box(balls);
    double yD;
    double D = ternary_max([&](double y) { return min_slack(balls, x0, y); }, box.ylo, box.yhi,
                           iters, &yD);
    res.slack = D;
    if (D < 0.0) {
        res.disk_feasible = false;
        res.y = yD;
        res.value = -std::numeric_limits<double>::infinity();
        return res;
    }
    res.disk_feasible = true;
    double yhiF = bisect_down([&](double y) { return min_slack(balls, x0, y); }, yD, box.yhi);
    double yloF = -bisect_down([&](double y) { return min_slack(balls, x0, -y); }, -yD, -box.ylo);
    double pad = 1e-13 * (1.0 + yhiF - yloF);
    double yg;
    double g = ternary_max([&](double y) { return gap(balls, x0, y); }, yloF + pad, yhiF - pad,
                           iters, &yg);
    res.y = yg;
    res.value = g;
    return res;
}

// Interval of y on the column where the family's vertical segment exists.
template <class BallsT>
inline std::optional<std::pair<double, double>> column_interval(const BallsT& balls, double x0,
                                                                double eps) {
    auto m = maximize_gap_on_column(balls, x0);
    if (!m.disk_feasible || m.value < -eps) return std::nullopt;
    SearchBox box = bounding_box(balls);
    auto val = [&](double y) {
        double s = min_slack(balls, x0, y);
        if (s < 0.0) return s;
        return std::min(s, gap(balls, x0, y) + eps);
    };
    double hi = bisect_down(val, m.y, box.yhi);
    double lo = -bisect_down([&](double y) { return val(-y); }, -m.y, -box.ylo);
    return std::make_pair(lo, hi);
}

} // namespace detail_sp

// ======================================================================
// Projected planar maps (slab decomposition, no persistence)
// ======================================================================

struct MapArc {
    Circle3 circle;
    double t0 = 0, t1 = 0;  // x-monotone angular piece
    double xlo = 0, xhi = 0;
    int ball_a = -1, ball_b = -1; // source balls; ball_b = -1 for equator arcs
};

struct PlanarMap {
    static constexpr int kOutside = -1;
    bool upper = true;
    std::vector<MapArc> arcs;
    std::vector<double> slab_x;
    std::vector<std::vector<int>> slab_arcs;   // per slab, bottom-to-top
    std::vector<std::vector<int>> slab_labels; // per slab, gap labels (arcs+1)
    double xmin = 0, xmax = 0;
    bool trivial = false; // degenerate polytope: maps answered by direct scan
};

namespace detail_sp {

inline double arc_x_at(const MapArc& a, double theta) {
    auto [e1, e2] = a.circle.frame();
    return a.circle.center.x + a.circle.radius * (std::cos(theta) * e1.x + std::sin(theta) * e2.x);
}

inline double arc_y_at_theta(const MapArc& a, double theta) {
    auto [e1, e2] = a.circle.frame();
    return a.circle.center.y + a.circle.radius * (std::cos(theta) * e1.y + std::sin(theta) * e2.y);
}

// Solve for the angle in [t0, t1] whose projected x equals x; the piece is
// x-monotone so the solution is unique.
inline double arc_theta_at_x(const MapArc& a, double x) {
    auto [e1, e2] = a.circle.frame();
    double A = a.circle.radius * e1.x, B = a.circle.radius * e2.x;
    double C = x - a.circle.center.x;
    double R = std::hypot(A, B);
    if (R < 1e-300) return a.t0;
    double c = std::clamp(C / R, -1.0, 1.0);
    double phi0 = std::atan2(B, A);
    double d = std::acos(c);
    double cands[2] = {phi0 + d, phi0 - d};
    double best = a.t0;
    double besterr = 1e300;
    for (double cand : cands) {
        // wrap into [t0, t0 + 2pi)
        double t = a.t0 + wrap_angle(cand - a.t0);
        if (t <= a.t1 + 1e-9) {
            double err = std::abs(arc_x_at(a, t) - x);
            if (err < besterr) { besterr = err; best = t; }
        }
        // endpoints guard
        for (double tend : {a.t0, a.t1}) {
            double err = std::abs(arc_x_at(a, tend) - x);
            if (err < besterr) { besterr = err; best = tend; }
        }
    }
    return best;
}

inline double arc_y_at_x(const MapArc& a, double x) { return arc_y_at_theta(a, arc_theta_at_x(a, x)); }

// Split angles of one circle where the projected x is extremal.
inline void x_extreme_angles(const Circle3& c, std::vector<double>& out) {
    auto [e1, e2] = c.frame();
    double t = std::atan2(e2.x, e1.x);
    // dx/dtheta = rho(-sin e1.x + cos e2.x) = 0  =>  tan = e2.x / e1.x
    out.push_back(wrap_angle(t));
    out.push_back(wrap_angle(t + kPi));
}

// Angles on the circle where the point's z equals zc.
inline void z_cross_angles(const Circle3& c, double zc, std::vector<double>& out) {
    auto [e1, e2] = c.frame();
    double A = c.radius * e1.z, B = c.radius * e2.z, C = zc - c.center.z;
    double R = std::hypot(A, B);
    if (R < 1e-300) return;
    double v = C / R;
    if (v < -1.0 || v > 1.0) return;
    double phi0 = std::atan2(B, A);
    double d = std::acos(std::clamp(v, -1.0, 1.0));
    out.push_back(wrap_angle(phi0 + d));
    out.push_back(wrap_angle(phi0 - d));
}

} // namespace detail_sp

inline std::pair<PlanarMap, PlanarMap> project_maps(const SphericalPolytope& poly,
                                                    const Tolerance& tol = default_tolerance()) {
    PlanarMap up, down;
    up.upper = true;
    down.upper = false;
    if (poly.degenerate) {
        up.trivial = down.trivial = true;
        up.xmin = up.xmax = down.xmin = down.xmax = poly.degenerate_point.x;
        return {up, down};
    }
    double scale = poly.r;
    for (auto& b : poly.balls) scale = std::max({scale, std::abs(b.center.x), std::abs(b.center.y)});
    double e = tol.eps(scale);

    struct Piece {
        MapArc arc;
        bool in_upper, in_lower;
    };
    std::vector<Piece> pieces;

    auto add_pieces = [&](const Circle3& circle, double s, double len, int ba, int bb) {
        // split at x-extremes and z-crossings of the source sphere centers
        std::vector<double> cuts;
        detail_sp::x_extreme_angles(circle, cuts);
        if (ba >= 0) detail_sp::z_cross_angles(circle, poly.balls[ba].center.z, cuts);
        if (bb >= 0) detail_sp::z_cross_angles(circle, poly.balls[bb].center.z, cuts);
        std::vector<double> local{0.0, len};
        for (double c : cuts) {
            double rel = wrap_angle(c - s);
            if (rel > 1e-9 && rel < len - 1e-9) local.push_back(rel);
        }
        std::sort(local.begin(), local.end());
        for (std::size_t i = 0; i + 1 < local.size(); ++i) {
            double a0 = s + local[i], a1 = s + local[i + 1];
            if (a1 - a0 < 1e-10) continue;
            MapArc m;
            m.circle = circle;
            m.t0 = a0;
            m.t1 = a1;
            m.ball_a = ba;
            m.ball_b = bb;
            double xa = detail_sp::arc_x_at(m, a0), xb = detail_sp::arc_x_at(m, a1);
            m.xlo = std::min(xa, xb);
            m.xhi = std::max(xa, xb);
            Point3 mid = circle.point_at(0.5 * (a0 + a1));
            bool in_up, in_low;
            if (bb < 0) {
                in_up = in_low = true; // equator arcs belong to the rim E*
            } else {
                double nza = mid.z - poly.balls[ba].center.z;
                double nzb = mid.z - poly.balls[bb].center.z;
                in_up = std::max(nza, nzb) >= -e;
                in_low = std::min(nza, nzb) <= e;
            }
            pieces.push_back({std::move(m), in_up, in_low});
        }
    };

    for (auto& edge : poly.edges)
        add_pieces(edge.arc.circle, edge.arc.theta0, edge.arc.theta1 - edge.arc.theta0,
                   edge.ball_a, edge.ball_b);

    // Equator arcs: the silhouette of each face's sphere, clipped to the face.
    for (auto& f : poly.faces) {
        const Ball& b = poly.balls[f.ball];
        Circle3 eq(b.center, poly.r, Direction(Vec3{0, 0, 1}));
        auto [e1, e2] = eq.frame();
        AngleSet feas = AngleSet::whole();
        for (int l = 0; l < static_cast<int>(poly.balls.size()); ++l) {
            if (l == f.ball) continue;
            if (dist(poly.balls[l].center, b.center) <= tol.eps(poly.r)) continue;
            clip_circle(feas, CircleConstraint::inside_ball(eq.center, eq.radius, e1, e2,
                                                            poly.balls[l].center, poly.r));
            if (feas.is_empty()) break;
        }
        if (feas.is_empty()) continue;
        if (feas.full) add_pieces(eq, 0.0, kTwoPi, f.ball, -1);
        else
            for (auto& [s, len] : feas.arcs) add_pieces(eq, s, len, f.ball, -1);
    }

    auto z_top_label = [&](double x, double y, bool upper) -> int {
        auto ext = detail_sp::vertical_extent(poly.balls, x, y);
        if (!ext.disk_ok || ext.lo > ext.hi + e) return PlanarMap::kOutside;
        return upper ? ext.hi_ball : ext.lo_ball;
    };

    auto build = [&](PlanarMap& map, bool upper) {
        for (auto& p : pieces)
            if (upper ? p.in_upper : p.in_lower) map.arcs.push_back(p.arc);
        std::vector<double> xs;
        for (auto& a : map.arcs) {
            xs.push_back(a.xlo);
            xs.push_back(a.xhi);
        }
        std::sort(xs.begin(), xs.end());
        for (double x : xs)
            if (map.slab_x.empty() || x - map.slab_x.back() > 4.0 * e) map.slab_x.push_back(x);
        if (map.slab_x.size() < 2) {
            map.trivial = true;
            map.xmin = map.xmax = map.slab_x.empty() ? 0.0 : map.slab_x[0];
            return;
        }
        map.xmin = map.slab_x.front();
        map.xmax = map.slab_x.back();
        int nslab = static_cast<int>(map.slab_x.size()) - 1;
        map.slab_arcs.resize(nslab);
        map.slab_labels.resize(nslab);
        for (int s = 0; s < nslab; ++s) {
            double mx = 0.5 * (map.slab_x[s] + map.slab_x[s + 1]);
            std::vector<std::pair<double, int>> ys;
            for (int ai = 0; ai < static_cast<int>(map.arcs.size()); ++ai) {
                auto& a = map.arcs[ai];
                if (a.xlo <= mx && mx <= a.xhi) ys.push_back({detail_sp::arc_y_at_x(a, mx), ai});
            }
            std::sort(ys.begin(), ys.end());
            for (auto& [y, ai] : ys) map.slab_arcs[s].push_back(ai);
            auto& labels = map.slab_labels[s];
            labels.resize(ys.size() + 1);
            for (std::size_t g = 0; g <= ys.size(); ++g) {
                double ylo = g == 0 ? ys.front().first - (1.0 + poly.r) : ys[g - 1].first;
                double yhi = g == ys.size() ? ys.back().first + (1.0 + poly.r) : ys[g].first;
                labels[g] = z_top_label(mx, 0.5 * (ylo + yhi), upper);
            }
        }
    };
    build(up, true);
    build(down, false);
    return {up, down};
}

struct MapLocate {
    enum class Kind { Face, OnArc, Outside };
    Kind kind = Kind::Outside;
    int label = PlanarMap::kOutside;
    std::vector<int> balls;
};

inline MapLocate locate(const PlanarMap& map, double x, double y,
                        const Tolerance& tol = default_tolerance(), double scale = 1.0) {
    MapLocate out;
    double e = 4.0 * tol.eps(scale);
    if (map.trivial) return out; // callers fall back to direct scans
    if (x < map.xmin - e || x > map.xmax + e) return out;
    int nslab = static_cast<int>(map.slab_arcs.size());
    int s = static_cast<int>(std::upper_bound(map.slab_x.begin(), map.slab_x.end(), x) -
                             map.slab_x.begin()) - 1;
    s = std::clamp(s, 0, nslab - 1);
    const auto& ids = map.slab_arcs[s];
    const auto& labels = map.slab_labels[s];
    int lo = 0, hi = static_cast<int>(ids.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (detail_sp::arc_y_at_x(map.arcs[ids[mid]], x) < y) lo = mid + 1;
        else hi = mid;
    }
    auto arc_hit = [&](int pos) -> bool {
        if (pos < 0 || pos >= static_cast<int>(ids.size())) return false;
        return std::abs(detail_sp::arc_y_at_x(map.arcs[ids[pos]], x) - y) <= e;
    };
    std::vector<int> hit_positions;
    for (int pos : {lo - 1, lo, lo + 1})
        if (arc_hit(pos)) hit_positions.push_back(pos);
    if (!hit_positions.empty()) {
        out.kind = MapLocate::Kind::OnArc;
        for (int pos : hit_positions) {
            auto& a = map.arcs[ids[pos]];
            out.balls.push_back(a.ball_a);
            if (a.ball_b >= 0) out.balls.push_back(a.ball_b);
            for (int g : {pos, pos + 1})
                if (labels[g] >= 0) out.balls.push_back(labels[g]);
        }
        std::sort(out.balls.begin(), out.balls.end());
        out.balls.erase(std::unique(out.balls.begin(), out.balls.end()), out.balls.end());
        out.label = labels[hit_positions.front()];
        return out;
    }
    int label = labels[lo];
    if (label == PlanarMap::kOutside) {
        out.kind = MapLocate::Kind::Outside;
        return out;
    }
    out.kind = MapLocate::Kind::Face;
    out.label = label;
    out.balls = {label};
    return out;
}

// ======================================================================
// Pi0 / Pi1 / Pi2 over families of mapped polytopes
// ======================================================================

struct MappedPolytope {
    SphericalPolytope poly;
    PlanarMap upper, lower;
};

inline MappedPolytope make_mapped(SphericalPolytope p, const Tolerance& tol = default_tolerance()) {
    MappedPolytope m;
    auto maps = project_maps(p, tol);
    m.poly = std::move(p);
    m.upper = std::move(maps.first);
    m.lower = std::move(maps.second);
    return m;
}

struct WitnessRef {
    int poly = 0;
    int ball = 0;
};
using WitnessSet = std::vector<WitnessRef>;

struct Pi0Result {
    enum class Kind { Inside, Boundary, Empty };
    Kind kind = Kind::Empty;
    Point3 point;
    WitnessSet witnesses;
};

namespace detail_sp {

// Direct per-polytope certificate that the vertical line misses it, or its
// segment when it does not.
struct ScanResult {
    bool empty = false;
    double lo = 0, hi = 0;
    int lo_ball = -1, hi_ball = -1;
    WitnessSet witnesses;
};

inline ScanResult scan_column(const SphericalPolytope& poly, int poly_id, double x, double y,
                              double eps) {
    ScanResult r;
    auto ext = vertical_extent(poly.balls, x, y);
    if (!ext.disk_ok) {
        r.empty = true;
        r.witnesses = {{poly_id, ext.miss_ball}};
        return r;
    }
    if (ext.lo > ext.hi + eps) {
        r.empty = true;
        r.witnesses = {{poly_id, ext.lo_ball}, {poly_id, ext.hi_ball}};
        return r;
    }
    r.lo = ext.lo;
    r.hi = ext.hi;
    r.lo_ball = ext.lo_ball;
    r.hi_ball = ext.hi_ball;
    return r;
}

struct FlatFamily {
    std::vector<Ball> balls;
    std::vector<WitnessRef> refs;
};

inline FlatFamily flatten(const std::vector<MappedPolytope>& polys) {
    FlatFamily f;
    for (int p = 0; p < static_cast<int>(polys.size()); ++p)
        for (int b = 0; b < static_cast<int>(polys[p].poly.balls.size()); ++b) {
            f.balls.push_back(polys[p].poly.balls[b]);
            f.refs.push_back({p, b});
        }
    return f;
}

inline FlatFamily subfamily(const FlatFamily& f, const WitnessSet& w) {
    FlatFamily out;
    for (auto& ref : w) {
        for (std::size_t i = 0; i < f.refs.size(); ++i)
            if (f.refs[i].poly == ref.poly && f.refs[i].ball == ref.ball) {
                out.balls.push_back(f.balls[i]);
                out.refs.push_back(f.refs[i]);
                break;
            }
    }
    return out;
}

// Active balls near the optimum of the gap search: the disk bottleneck or
// the hi/lo pair defining the gap.
inline WitnessSet actives_at(const FlatFamily& f, double x, double y, double eps) {
    WitnessSet w;
    auto ext_or = [&]() {
        double best = std::numeric_limits<double>::infinity();
        for (auto& b : f.balls) best = std::min(best, disk_slack(b, x, y));
        return best;
    };
    double ms = ext_or();
    if (ms < eps) {
        for (std::size_t i = 0; i < f.balls.size(); ++i)
            if (disk_slack(f.balls[i], x, y) <= ms + eps) w.push_back(f.refs[i]);
        if (w.size() > 3) w.resize(3);
        if (ms < 0.0) return w;
    }
    double lo = -1e300, hi = 1e300;
    for (auto& b : f.balls) {
        double s = std::max(0.0, disk_slack(b, x, y));
        double h = std::sqrt(s);
        lo = std::max(lo, b.center.z - h);
        hi = std::min(hi, b.center.z + h);
    }
    for (std::size_t i = 0; i < f.balls.size(); ++i) {
        double s = std::max(0.0, disk_slack(f.balls[i], x, y));
        double h = std::sqrt(s);
        if (f.balls[i].center.z - h >= lo - eps) w.push_back(f.refs[i]);
        else if (f.balls[i].center.z + h <= hi + eps) w.push_back(f.refs[i]);
    }
    std::sort(w.begin(), w.end(), [](auto& a, auto& b) {
        return a.poly != b.poly ? a.poly < b.poly : a.ball < b.ball;
    });
    w.erase(std::unique(w.begin(), w.end(),
                        [](auto& a, auto& b) { return a.poly == b.poly && a.ball == b.ball; }),
            w.end());
    return w;
}

// Grow a witness family until its own 2D gap maximum is negative
// (certifying an empty intersection), or fall back to everything.
inline WitnessSet certified_empty_witnesses(const FlatFamily& all, WitnessSet seed, double eps) {
    WitnessSet w = std::move(seed);
    for (int round = 0; round < 8; ++round) {
        auto fam = subfamily(all, w);
        auto m = maximize_gap(fam.balls);
        if (!m.disk_feasible || m.value < -eps) return w;
        auto extra = actives_at(all, m.x, m.y, eps);
        std::size_t before = w.size();
        for (auto& ref : extra) {
            bool seen = false;
            for (auto& have : w)
                if (have.poly == ref.poly && have.ball == ref.ball) { seen = true; break; }
            if (!seen) w.push_back(ref);
        }
        if (w.size() == before) break;
    }
    WitnessSet everything = all.refs;
    return everything;
}

} // namespace detail_sp

inline Pi0Result pi0_point_query(const std::vector<MappedPolytope>& polys, double qx, double qy,
                                 const Tolerance& tol = default_tolerance()) {
    Pi0Result out;
    double scale = 1.0;
    for (auto& mp : polys)
        for (auto& b : mp.poly.balls) scale = std::max(scale, b.radius + norm(b.center));
    double e = tol.eps(scale);

    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    WitnessRef lo_ref{-1, -1}, hi_ref{-1, -1};
    for (int p = 0; p < static_cast<int>(polys.size()); ++p) {
        const auto& mp = polys[p];
        double plo, phi;
        int plo_b, phi_b;
        auto up = locate(mp.upper, qx, qy, tol, scale);
        auto low = locate(mp.lower, qx, qy, tol, scale);
        if (mp.upper.trivial || mp.lower.trivial || up.kind == MapLocate::Kind::Outside ||
            low.kind == MapLocate::Kind::Outside) {
            auto scan = detail_sp::scan_column(mp.poly, p, qx, qy, e);
            if (scan.empty) {
                out.kind = Pi0Result::Kind::Empty;
                out.witnesses = scan.witnesses;
                return out;
            }
            plo = scan.lo;
            phi = scan.hi;
            plo_b = scan.lo_ball;
            phi_b = scan.hi_ball;
        } else {
            std::vector<int> ballset = up.balls;
            ballset.insert(ballset.end(), low.balls.begin(), low.balls.end());
            plo = -std::numeric_limits<double>::infinity();
            phi = std::numeric_limits<double>::infinity();
            plo_b = phi_b = -1;
            for (int b : ballset) {
                double s = detail_sp::disk_slack(mp.poly.balls[b], qx, qy);
                double h = std::sqrt(std::max(0.0, s));
                double zl = mp.poly.balls[b].center.z - h, zh = mp.poly.balls[b].center.z + h;
                if (zl > plo) { plo = zl; plo_b = b; }
                if (zh < phi) { phi = zh; phi_b = b; }
            }
        }
        if (plo > lo) { lo = plo; lo_ref = {p, plo_b}; }
        if (phi < hi) { hi = phi; hi_ref = {p, phi_b}; }
    }
    if (lo > hi + e) {
        out.kind = Pi0Result::Kind::Empty;
        out.witnesses = {lo_ref, hi_ref};
        return out;
    }
    out.point = {qx, qy, 0.5 * (lo + hi)};
    out.kind = hi - lo <= e ? Pi0Result::Kind::Boundary : Pi0Result::Kind::Inside;
    return out;
}

struct Pi1Result {
    enum class Kind { Hit, Empty };
    Kind kind = Kind::Empty;
    Point3 point;
    int side = 0; // +1: K* right of the line, -1: left
    bool global_empty = false;
    WitnessSet witnesses;
};

inline Pi1Result pi1_line_query(const std::vector<MappedPolytope>& polys, double x0,
                                const Tolerance& tol = default_tolerance()) {
    Pi1Result out;
    double scale = 1.0;
    for (auto& mp : polys)
        for (auto& b : mp.poly.balls) scale = std::max(scale, b.radius + norm(b.center));
    double e = tol.eps(scale);
    auto all = detail_sp::flatten(polys);

    auto empty_with = [&](WitnessSet w) {
        auto fam = detail_sp::subfamily(all, w);
        auto m = detail_sp::maximize_gap(fam.balls);
        out.kind = Pi1Result::Kind::Empty;
        out.side = m.x >= x0 ? 1 : -1;
        out.global_empty = !m.disk_feasible || m.value < -e;
        out.witnesses = std::move(w);
        return out;
    };

    // Collect candidate y breakpoints from every map's arcs on this column.
    std::vector<double> ys;
    for (auto& mp : polys)
        for (const PlanarMap* map : {&mp.upper, &mp.lower}) {
            if (map->trivial) continue;
            if (x0 < map->xmin - e || x0 > map->xmax + e) continue;
            int nslab = static_cast<int>(map->slab_arcs.size());
            int s = static_cast<int>(std::upper_bound(map->slab_x.begin(), map->slab_x.end(), x0) -
                                     map->slab_x.begin()) - 1;
            s = std::clamp(s, 0, nslab - 1);
            for (int ai : map->slab_arcs[s]) ys.push_back(detail_sp::arc_y_at_x(map->arcs[ai], x0));
        }
    std::sort(ys.begin(), ys.end());

    double wlo = -std::numeric_limits<double>::infinity();
    double whi = std::numeric_limits<double>::infinity();
    WitnessSet acc;
    auto box = detail_sp::bounding_box(all.balls);
    for (int iter = 0; iter < 80; ++iter) {
        // choose a probe: median remaining breakpoint, else window midpoint
        std::vector<double> inside;
        for (double y : ys)
            if (y > wlo + e && y < whi - e) inside.push_back(y);
        double probe;
        if (!inside.empty()) probe = inside[inside.size() / 2];
        else {
            double a = std::max(wlo, box.ylo - 1.0), b = std::min(whi, box.yhi + 1.0);
            if (a > b) break;
            probe = 0.5 * (a + b);
        }
        auto p0 = pi0_point_query(polys, x0, probe, tol);
        if (p0.kind != Pi0Result::Kind::Empty) {
            out.kind = Pi1Result::Kind::Hit;
            out.point = p0.point;
            return out;
        }
        auto fam = detail_sp::subfamily(all, p0.witnesses);
        auto interval = detail_sp::column_interval(fam.balls, x0, e);
        if (!interval) return empty_with(p0.witnesses);
        wlo = std::max(wlo, interval->first);
        whi = std::min(whi, interval->second);
        for (auto& w : p0.witnesses) acc.push_back(w);
        if (whi - wlo <= 4.0 * e) break;
        if (inside.empty() && whi - wlo <= 8.0 * e) break;
    }
    // Final direct check on the remaining window.
    auto m = detail_sp::maximize_gap_on_column(all.balls, x0);
    if (m.disk_feasible && m.value >= -e) {
        auto ext = detail_sp::vertical_extent(all.balls, x0, m.y);
        out.kind = Pi1Result::Kind::Hit;
        out.point = {x0, m.y, 0.5 * (ext.lo + ext.hi)};
        return out;
    }
    WitnessSet w = detail_sp::actives_at(all, x0, m.y, e);
    for (auto& a : acc) w.push_back(a);
    std::sort(w.begin(), w.end(), [](auto& a, auto& b) {
        return a.poly != b.poly ? a.poly < b.poly : a.ball < b.ball;
    });
    w.erase(std::unique(w.begin(), w.end(),
                        [](auto& a, auto& b) { return a.poly == b.poly && a.ball == b.ball; }),
            w.end());
    // ensure the witness family itself misses the column
    auto fam = detail_sp::subfamily(all, w);
    auto mw = detail_sp::maximize_gap_on_column(fam.balls, x0);
    if (mw.disk_feasible && mw.value >= -e) w = all.refs;
    return empty_with(std::move(w));
}

struct Pi2Result {
    enum class Kind { Witness, Empty };
    Kind kind = Kind::Empty;
    Point3 point;
    bool degenerate = false;
    WitnessSet witnesses;
};

// True iff the balls whose boundaries pass through w intersect only in {w}.
inline bool is_degenerate(const std::vector<MappedPolytope>& polys, const Point3& w,
                          const Tolerance& tol = default_tolerance()) {
    std::vector<Point3> boundary;
    double r = 0.0;
    for (auto& mp : polys)
        for (auto& b : mp.poly.balls) {
            r = b.radius;
            double d = dist(w, b.center);
            if (d > b.radius + 1e4 * tol.eps(b.radius)) throw NotMember{};
            if (std::abs(d - b.radius) <= 1e3 * tol.eps(b.radius)) boundary.push_back(b.center);
        }
    if (boundary.empty()) return false;
    auto seb = smallest_enclosing_ball(boundary);
    return seb.radius >= r - 1e3 * tol.eps(r);
}

inline Pi2Result pi2_emptiness(const std::vector<MappedPolytope>& polys,
                               const Tolerance& tol = default_tolerance()) {
    Pi2Result out;
    auto all = detail_sp::flatten(polys);
    if (all.balls.empty()) {
        out.kind = Pi2Result::Kind::Witness;
        out.point = {0, 0, 0};
        return out;
    }
    double scale = 1.0;
    for (auto& b : all.balls) scale = std::max(scale, b.radius + norm(b.center));
    double e = tol.eps(scale);

    // Stage 1: binary search over the union of slab boundaries via Pi1.
    std::vector<double> xs;
    for (auto& mp : polys)
        for (const PlanarMap* map : {&mp.upper, &mp.lower})
            for (double x : map->slab_x) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double a, double b) { return std::abs(a - b) <= e; }),
             xs.end());

    WitnessSet trim;
    double xlo, xhi;
    if (xs.size() < 2) {
        auto box = detail_sp::bounding_box(all.balls);
        xlo = box.xlo;
        xhi = box.xhi;
    } else {
        int lo = 0, hi = static_cast<int>(xs.size()) - 1;
        while (hi - lo > 1) {
            int mid = (lo + hi) / 2;
            auto p1 = pi1_line_query(polys, xs[mid], tol);
            if (p1.kind == Pi1Result::Kind::Hit) {
                out.kind = Pi2Result::Kind::Witness;
                out.point = p1.point;
                out.degenerate = is_degenerate(polys, p1.point, tol);
                return out;
            }
            if (p1.global_empty) {
                out.kind = Pi2Result::Kind::Empty;
                out.witnesses = p1.witnesses;
                return out;
            }
            for (auto& w : p1.witnesses) trim.push_back(w);
            if (p1.side > 0) lo = mid;
            else hi = mid;
        }
        xlo = xs[lo];
        xhi = xs[hi];
    }

    // Stage 2: direct feasibility inside the final slab.
    auto m = detail_sp::maximize_gap(all.balls, xlo - e, xhi + e);
    if (m.disk_feasible && m.value >= -e) {
        auto ext = detail_sp::vertical_extent(all.balls, m.x, m.y);
        out.kind = Pi2Result::Kind::Witness;
        out.point = {m.x, m.y, 0.5 * (ext.lo + ext.hi)};
        out.degenerate = is_degenerate(polys, out.point, tol);
        return out;
    }
    WitnessSet seed = detail_sp::actives_at(all, m.x, m.y, e);
    for (auto& w : trim) seed.push_back(w);
    std::sort(seed.begin(), seed.end(), [](auto& a, auto& b) {
        return a.poly != b.poly ? a.poly < b.poly : a.ball < b.ball;
    });
    seed.erase(std::unique(seed.begin(), seed.end(),
                           [](auto& a, auto& b) { return a.poly == b.poly && a.ball == b.ball; }),
               seed.end());
    out.kind = Pi2Result::Kind::Empty;
    out.witnesses = detail_sp::certified_empty_witnesses(all, std::move(seed), e);
    return out;
}

} // namespace twocenter
