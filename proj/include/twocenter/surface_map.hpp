#pragma once

#include "circle_clip.hpp"
#include "geometry.hpp"
#include "miniball.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace twocenter {

// ======================================================================
// sigma_L: the searched portion of the boundary of K(P_L)
// ======================================================================

struct SigmaConstraintTag {
    enum class Kind { BallBall, RightHemisphere, LambdaClip, ExtraBall };
    Kind kind = Kind::BallBall;
    int other = -1; // P_L index (BallBall) or extra-ball index (ExtraBall)
};

struct SigmaArc {
    Arc3 arc;                // on the owning face's sphere
    int face = -1;           // index into SigmaL::faces
    int cons_index = -1;     // which face constraint carries this arc
    SigmaConstraintTag source;
};

struct SigmaFace {
    int point = -1;                 // index into SigmaL::centers
    std::vector<int> arcs;          // boundary arcs of this face
    std::vector<Vec3> cons_n;       // face region: u . n >= b in direction space
    std::vector<double> cons_b;
};

struct SigmaL {
    double r = 0.0;
    double lambda_off = 0.0;        // clip plane x <= lambda_off (rotated frame)
    std::vector<Point3> centers;    // P_L
    std::vector<Ball> extra;        // additional constraint balls (sigma'')
    std::vector<SigmaFace> faces;
    std::vector<SigmaArc> arcs;
    bool degenerate = false;        // K(P_L) is a single point
    Point3 degenerate_point;

    const Point3& face_center(const SigmaFace& f) const { return centers[f.point]; }

    bool face_contains_dir(const SigmaFace& f, const Vec3& u, double eps) const {
        for (std::size_t i = 0; i < f.cons_n.size(); ++i)
            if (dot(u, f.cons_n[i]) < f.cons_b[i] - eps) return false;
        return true;
    }
    bool contains(const Point3& x, const Tolerance& tol = default_tolerance()) const {
        double e = 100.0 * tol.eps(r);
        if (degenerate) return dist(x, degenerate_point) <= e;
        for (auto& f : faces) {
            const Point3& c = face_center(f);
            if (std::abs(dist(x, c) - r) > e) continue;
            Vec3 u = (x - c) / r;
            if (face_contains_dir(f, u, e / r)) return true;
        }
        return false;
    }
};

// Builds sigma_L (or sigma_L'' when constraint balls are given): the right
// part of the boundary of the intersection of B_r(p), p in P_L, clipped to
// the halfspace x <= lambda, inside every extra ball.  Inputs are assumed
// to be expressed in the rotated frame where the guessed orientation is +x.
inline std::optional<SigmaL> build_sigma(const std::vector<Point3>& P_L, double r,
                                         const Plane& lambda, const std::vector<Ball>& extra = {},
                                         const Tolerance& tol = default_tolerance(),
                                         std::uint64_t seed = 0x51697a) {
    if (P_L.empty()) throw EmptyInput{};
    if (std::abs(lambda.normal.x()) < 1.0 - 1e-9)
        throw GeometryError("lambda must be yz-parallel in the rotated frame");
    double lam = lambda.normal.x() > 0 ? lambda.offset : -lambda.offset;

    auto status = balls_intersection_status(P_L, r, tol, seed);
    if (status.status == IntersectionStatus::Empty) return std::nullopt;

    SigmaL sig;
    sig.r = r;
    sig.lambda_off = lam;
    sig.centers = P_L;
    sig.extra = extra;

    double e = tol.eps(r);
    if (status.status == IntersectionStatus::Degenerate) {
        const Point3& w = status.witness;
        if (w.x > lam + e) return std::nullopt;
        for (auto& b : extra)
            if (!tol.le(dist(w, b.center), b.radius)) return std::nullopt;
        sig.degenerate = true;
        sig.degenerate_point = w;
        return sig;
    }

    int n = static_cast<int>(P_L.size());
    for (int i = 0; i < n; ++i) {
        SigmaFace f;
        f.point = i;
        const Point3& q = P_L[i];
        std::vector<SigmaConstraintTag> tags;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Vec3 d = P_L[j] - q;
            double dd = norm(d);
            if (dd <= e) continue; // duplicate center
            f.cons_n.push_back(d / dd);
            f.cons_b.push_back(dd / (2.0 * r));
            tags.push_back({SigmaConstraintTag::Kind::BallBall, j});
        }
        f.cons_n.push_back({1, 0, 0});
        f.cons_b.push_back(0.0);
        tags.push_back({SigmaConstraintTag::Kind::RightHemisphere, -1});
        f.cons_n.push_back({-1, 0, 0});
        f.cons_b.push_back((q.x - lam) / r);
        tags.push_back({SigmaConstraintTag::Kind::LambdaClip, -1});
        for (int j = 0; j < static_cast<int>(extra.size()); ++j) {
            Vec3 d = extra[j].center - q;
            double dd = norm(d);
            if (dd <= e) continue;
            f.cons_n.push_back(d / dd);
            f.cons_b.push_back((dd * dd + r * r - extra[j].radius * extra[j].radius) /
                               (2.0 * r * dd));
            tags.push_back({SigmaConstraintTag::Kind::ExtraBall, j});
        }

        int m = static_cast<int>(f.cons_n.size());
        bool any_arc = false;
        for (int ci = 0; ci < m; ++ci) {
            double b = f.cons_b[ci];
            if (b >= 1.0 - 1e-12 || b <= -1.0 + 1e-12) continue; // circle off the sphere
            // world circle of this constraint on sphere(q, r)
            Circle3 circ(q + f.cons_n[ci] * (r * b), r * std::sqrt(1.0 - b * b),
                         Direction(f.cons_n[ci]));
            auto [e1, e2] = circ.frame();
            AngleSet feas = AngleSet::whole();
            for (int cj = 0; cj < m && !feas.is_empty(); ++cj) {
                if (cj == ci) continue;
                // u . n >= b  <=>  x . n >= q . n + r b
                feas.clip_halfplane(-circ.radius * dot(f.cons_n[cj], e1),
                                    -circ.radius * dot(f.cons_n[cj], e2),
                                    dot(f.cons_n[cj], circ.center) -
                                        (dot(f.cons_n[cj], q) + r * f.cons_b[cj]));
            }
            if (feas.is_empty()) continue;
            auto emit = [&](double s, double len) {
                SigmaArc a;
                a.arc = Arc3(circ, s, s + len);
                a.face = static_cast<int>(sig.faces.size());
                a.cons_index = ci;
                a.source = tags[ci];
                sig.arcs.push_back(std::move(a));
                any_arc = true;
            };
            if (feas.full) emit(0.0, kTwoPi);
            else
                for (auto& [s, len] : feas.arcs) emit(s, len);
        }
        if (any_arc) {
            f.arcs.clear();
            for (int a = 0; a < static_cast<int>(sig.arcs.size()); ++a)
                if (sig.arcs[a].face == static_cast<int>(sig.faces.size()))
                    f.arcs.push_back(a);
            sig.faces.push_back(std::move(f));
        } else {
            // discard arcs provisionally tagged with this face id (none emitted)
        }
    }
    if (sig.faces.empty()) return std::nullopt;
    return sig;
}

// ======================================================================
// gamma curves: sphere boundaries of right-side points crossed with sigma
// ======================================================================

struct GammaPiece {
    Arc3 arc;
    int face = -1;
    bool point_contact = false; // tangency collapsed to a point
};

struct GammaCurve {
    int source = -1; // caller-side index of the generating point
    Point3 source_point;
    std::vector<GammaPiece> pieces;
};

inline GammaCurve gamma_curve(const Point3& p, const SigmaL& sig, int source_id = -1,
                              const Tolerance& tol = default_tolerance()) {
    GammaCurve out;
    out.source = source_id;
    out.source_point = p;
    if (sig.degenerate) return out;
    double r = sig.r;
    for (int fi = 0; fi < static_cast<int>(sig.faces.size()); ++fi) {
        const SigmaFace& f = sig.faces[fi];
        const Point3& q = sig.face_center(f);
        if (dist(p, q) <= tol.eps(r)) continue;
        SphereIntersection isect;
        try {
            isect = sphere_sphere_intersect(Ball(q, r), Ball(p, r), tol);
        } catch (const ConcentricEqual&) {
            continue;
        }
        if (isect.kind == SphereIntersection::Kind::Tangent) {
            Vec3 u = (isect.point - q) / r;
            if (sig.face_contains_dir(f, u, 10.0 * tol.eps(1.0))) {
                GammaPiece piece;
                piece.arc = Arc3(Circle3(isect.point, 0.0, Direction(normalized(p - q))), 0.0, 0.0);
                piece.face = fi;
                piece.point_contact = true;
                out.pieces.push_back(std::move(piece));
            }
            continue;
        }
        if (isect.kind != SphereIntersection::Kind::Circle) continue;
        const Circle3& circ = isect.circle;
        auto [e1, e2] = circ.frame();
        AngleSet feas = AngleSet::whole();
        for (std::size_t cj = 0; cj < f.cons_n.size() && !feas.is_empty(); ++cj)
            feas.clip_halfplane(-circ.radius * dot(f.cons_n[cj], e1),
                                -circ.radius * dot(f.cons_n[cj], e2),
                                dot(f.cons_n[cj], circ.center) -
                                    (dot(f.cons_n[cj], q) + r * f.cons_b[cj]));
        if (feas.is_empty()) continue;
        auto emit = [&](double s, double len) {
            GammaPiece piece;
            piece.arc = Arc3(circ, s, s + len);
            piece.face = fi;
            out.pieces.push_back(std::move(piece));
        };
        if (feas.full) emit(0.0, kTwoPi);
        else
            for (auto& [s, len] : feas.arcs) emit(s, len);
    }
    return out;
}

// ======================================================================
// Lemma 4.1 census: the short-arc / separating-plane audit
// ======================================================================

struct ArcCensus {
    bool omega_empty = false;   // C_ab lies inside B_r(q)
    bool omega_full = false;    // C_ab misses B_r(q) entirely
    double omega_angle = 0.0;   // angular length of omega = C_ab \ B_r(q)
    bool shorter_than_semicircle = false;
    int endpoints_right_of_lambda = 0;
    bool lemma_applicable = false;
    bool lemma_violated = false;
};

inline ArcCensus short_arc_census(const Point3& a, const Point3& b, const Point3& q, double r,
                                  double lambda_off, const Tolerance& tol = default_tolerance()) {
    auto isect = sphere_sphere_intersect(Ball(a, r), Ball(b, r), tol);
    if (isect.kind != SphereIntersection::Kind::Circle)
        throw NoIntersection("spheres around a and b do not meet in a circle");
    const Circle3& c = isect.circle;
    auto [e1, e2] = c.frame();
    AngleSet omega = AngleSet::whole();
    clip_circle(omega, CircleConstraint::outside_ball(c.center, c.radius, e1, e2, q, r));
    ArcCensus out;
    if (omega.is_empty()) {
        out.omega_empty = true;
        return out;
    }
    if (omega.full) {
        out.omega_full = true;
        out.omega_angle = kTwoPi;
        return out;
    }
    // a single ball clips a circle into one arc
    auto [s, len] = omega.arcs.front();
    out.omega_angle = len;
    out.shorter_than_semicircle = len < kPi - 1e-9;
    Point3 z0 = c.point_at(s), z1 = c.point_at(s + len);
    double e = tol.eps(std::abs(lambda_off) + r);
    if (z0.x > lambda_off + e) ++out.endpoints_right_of_lambda;
    if (z1.x > lambda_off + e) ++out.endpoints_right_of_lambda;
    out.lemma_applicable = out.shorter_than_semicircle;
    out.lemma_violated = out.lemma_applicable && out.endpoints_right_of_lambda == 0;
    return out;
}

// ======================================================================
// The map M: per-face arrangement of gamma curves over sigma
// ======================================================================

struct MapMNode {
    enum class Kind { Cell, Edge, Vertex };
    Kind kind = Kind::Cell;
    int face = -1;
    Point3 representative;
    std::vector<int> uncovered; // curve sources farther than r from the representative
    bool is_two_cell() const { return kind == Kind::Cell; }
};

struct MapM {
    const SigmaL* sigma = nullptr;
    int vertex_count = 0;
    int edge_count = 0;
    int cell_count = 0;
    std::vector<MapMNode> nodes;
    std::vector<std::pair<int, int>> incidences; // node graph edges
    int max_pair_intersections = 0;
    bool degenerate = false; // sigma was a single point
};

namespace detail_sm {

// Two circles on a common sphere: at most two intersection points.
inline int circle_circle_on_sphere(const Point3& q, double r, const Circle3& a, const Circle3& b,
                                   Point3 out[2]) {
    Vec3 na = a.normal.v, nb = b.normal.v;
    double da = dot(na, a.center), db = dot(nb, b.center);
    Vec3 w = cross(na, nb);
    double w2 = norm2(w);
    if (w2 < 1e-20) return 0;
    double g = dot(na, nb);
    double det = 1.0 - g * g;
    double alpha = ((da - dot(na, q)) - g * (db - dot(nb, q))) / det;
    double beta = ((db - dot(nb, q)) - g * (da - dot(na, q))) / det;
    Point3 base = q + na * alpha + nb * beta;
    Vec3 d = base - q;
    double c2 = r * r - norm2(d);
    double wd = dot(w, d); // zero: w orthogonal to both normals' span
    (void)wd;
    if (c2 < 0.0) return 0;
    double t = std::sqrt(c2 / w2);
    out[0] = base + w * t;
    out[1] = base - w * t;
    return t < 1e-12 ? 1 : 2;
}

inline bool angle_in_arc(double theta, double t0, double t1, double eps) {
    double rel = wrap_angle(theta - t0);
    double len = t1 - t0;
    if (rel <= len + eps) return true;
    return rel >= kTwoPi - eps; // wrapped to just before t0
}

struct FaceArcRef {
    Arc3 arc;
    bool is_border = false;
    int source = -1;      // curve source id (for gamma pieces)
    int border_cons = -1; // face constraint index (for border arcs)
};

} // namespace detail_sm

// Arrangement M on sigma: border arcs plus gamma pieces, subdivided at
// their intersections.  Cells are recovered from edge-side slots via
// sector pairing around vertices with ray-shoot stitching for isolated
// loops; every node carries a representative and its uncovered set.
inline MapM build_map(const SigmaL& sig, const std::vector<GammaCurve>& curves,
                      const Tolerance& tol = default_tolerance()) {
    MapM out;
    out.sigma = &sig;
    double r = sig.r;
    double e = 1e3 * tol.eps(r);

    if (sig.degenerate) {
        out.degenerate = true;
        MapMNode v;
        v.kind = MapMNode::Kind::Vertex;
        v.representative = sig.degenerate_point;
        for (auto& c : curves)
            if (dist(sig.degenerate_point, c.source_point) > r + e) v.uncovered.push_back(c.source);
        out.nodes.push_back(std::move(v));
        out.vertex_count = 1;
        return out;
    }

    // pairwise gamma-gamma intersections on sigma, for the <=3 audit
    std::map<std::pair<int, int>, std::vector<Point3>> pair_hits;

    int node_offset = 0;
    std::vector<std::pair<int, int>> edges_graph;
    PointDedup global_vdedup(std::max(1e-9, 32.0 * tol.eps(r)));
    std::map<int, int> global_vertex_node; // global vertex id -> node id

    auto uncovered_of = [&](const Point3& x) {
        std::vector<int> u;
        for (auto& c : curves)
            if (dist(x, c.source_point) > r + e) u.push_back(c.source);
        return u;
    };

    for (int fi = 0; fi < static_cast<int>(sig.faces.size()); ++fi) {
        const SigmaFace& face = sig.faces[fi];
        const Point3& q = sig.face_center(face);

        std::vector<detail_sm::FaceArcRef> refs;
        for (int ai : face.arcs) {
            detail_sm::FaceArcRef ref;
            ref.arc = sig.arcs[ai].arc;
            ref.is_border = true;
            ref.border_cons = sig.arcs[ai].cons_index;
            refs.push_back(std::move(ref));
        }
        for (auto& c : curves)
            for (auto& piece : c.pieces) {
                if (piece.face != fi || piece.point_contact) continue;
                detail_sm::FaceArcRef ref;
                ref.arc = piece.arc;
                ref.source = c.source;
                refs.push_back(std::move(ref));
            }

        // split full circles so every edgelet has endpoints
        std::vector<std::vector<double>> cuts(refs.size());
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (refs[i].arc.theta1 - refs[i].arc.theta0 >= kTwoPi - 1e-9) {
                cuts[i].push_back(refs[i].arc.theta0 + kPi);
            }
        }
        // pairwise intersections
        for (std::size_t i = 0; i < refs.size(); ++i)
            for (std::size_t j = i + 1; j < refs.size(); ++j) {
                Point3 hits[2];
                int nh = detail_sm::circle_circle_on_sphere(q, r, refs[i].arc.circle,
                                                            refs[j].arc.circle, hits);
                for (int h = 0; h < nh; ++h) {
                    double ti = refs[i].arc.circle.angle_of(hits[h]);
                    double tj = refs[j].arc.circle.angle_of(hits[h]);
                    double ang_eps = 1e-9;
                    if (!detail_sm::angle_in_arc(ti, refs[i].arc.theta0, refs[i].arc.theta1, ang_eps))
                        continue;
                    if (!detail_sm::angle_in_arc(tj, refs[j].arc.theta0, refs[j].arc.theta1, ang_eps))
                        continue;
                    cuts[i].push_back(refs[i].arc.theta0 + wrap_angle(ti - refs[i].arc.theta0));
                    cuts[j].push_back(refs[j].arc.theta0 + wrap_angle(tj - refs[j].arc.theta0));
                    if (!refs[i].is_border && !refs[j].is_border) {
                        int a = std::min(refs[i].source, refs[j].source);
                        int b = std::max(refs[i].source, refs[j].source);
                        if (a != b) pair_hits[{a, b}].push_back(hits[h]);
                    }
                }
            }

        // build edgelets
        struct Edgelet {
            Arc3 arc;
            int v0 = -1, v1 = -1; // face-local vertex ids
            bool is_border = false;
            int source = -1;
            int border_cons = -1;
        };
        PointDedup vdedup(std::max(1e-9, 32.0 * tol.eps(r)));
        std::vector<Edgelet> lets;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            auto& ref = refs[i];
            std::vector<double> local{ref.arc.theta0, ref.arc.theta1};
            for (double t : cuts[i])
                if (t > ref.arc.theta0 + 1e-9 && t < ref.arc.theta1 - 1e-9) local.push_back(t);
            std::sort(local.begin(), local.end());
            bool closed = ref.arc.theta1 - ref.arc.theta0 >= kTwoPi - 1e-9;
            for (std::size_t s = 0; s + 1 < local.size(); ++s) {
                if (local[s + 1] - local[s] < 1e-9) continue;
                Edgelet el;
                el.arc = Arc3(ref.arc.circle, local[s], local[s + 1]);
                el.is_border = ref.is_border;
                el.source = ref.source;
                el.border_cons = ref.border_cons;
                el.v0 = vdedup.insert(el.arc.start());
                el.v1 = vdedup.insert(el.arc.end());
                lets.push_back(std::move(el));
            }
            (void)closed;
        }
        if (lets.empty()) continue;

        int nv = static_cast<int>(vdedup.points.size());
        int ne = static_cast<int>(lets.size());

        // --- cells via sector pairing of edge-side slots ---
        std::vector<int> uf(2 * ne);
        for (int i = 0; i < 2 * ne; ++i) uf[i] = i;
        std::function<int(int)> find = [&](int x) {
            while (uf[x] != x) x = uf[x] = uf[uf[x]];
            return x;
        };
        auto unite = [&](int a, int b) { uf[find(a)] = find(b); };
        auto left_slot = [&](int el) { return 2 * el; };
        auto right_slot = [&](int el) { return 2 * el + 1; };

        // ends at each vertex with outgoing tangents
        struct End {
            int el;
            bool at_start;
            double angle;
        };
        std::vector<std::vector<End>> at_vertex(nv);
        for (int el = 0; el < ne; ++el) {
            for (bool at_start : {true, false}) {
                int v = at_start ? lets[el].v0 : lets[el].v1;
                const Point3 vp = vdedup.points[v];
                Vec3 radial = normalized(vp - q);
                auto [t1, t2] = orthonormal_frame(radial);
                auto [ce1, ce2] = lets[el].arc.circle.frame();
                double theta = at_start ? lets[el].arc.theta0 : lets[el].arc.theta1;
                Vec3 dtan = (ce2 * std::cos(theta) - ce1 * std::sin(theta)) *
                            lets[el].arc.circle.radius;
                if (!at_start) dtan = -dtan;
                // project out the radial component
                dtan = dtan - radial * dot(dtan, radial);
                double a = std::atan2(dot(dtan, t2), dot(dtan, t1));
                at_vertex[v].push_back({el, at_start, a});
            }
        }
        for (int v = 0; v < nv; ++v) {
            auto& ends = at_vertex[v];
            std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) {
                return a.angle < b.angle;
            });
            int k = static_cast<int>(ends.size());
            for (int i = 0; i < k; ++i) {
                const End& a = ends[i];
                const End& b = ends[(i + 1) % k];
                // ccw sector between outgoing a and b: join a's ccw side
                // with b's cw side
                int slot_a = a.at_start ? left_slot(a.el) : right_slot(a.el);
                int slot_b = b.at_start ? right_slot(b.el) : left_slot(b.el);
                unite(slot_a, slot_b);
            }
        }

        // connected components of the curve network (for stitching)
        std::vector<int> comp(ne, -1);
        int ncomp = 0;
        {
            std::vector<std::vector<int>> by_vertex(nv);
            for (int el = 0; el < ne; ++el) {
                by_vertex[lets[el].v0].push_back(el);
                by_vertex[lets[el].v1].push_back(el);
            }
            for (int el = 0; el < ne; ++el) {
                if (comp[el] >= 0) continue;
                std::vector<int> stack{el};
                comp[el] = ncomp;
                while (!stack.empty()) {
                    int cur = stack.back();
                    stack.pop_back();
                    for (int v : {lets[cur].v0, lets[cur].v1})
                        for (int o : by_vertex[v])
                            if (comp[o] < 0) {
                                comp[o] = ncomp;
                                stack.push_back(o);
                            }
                }
                ++ncomp;
            }
        }

        // side samples: step off the edgelet midpoint without crossing any
        // other border or curve circle
        auto side_ok = [&](const Point3& cand, const Point3& m, int el) -> bool {
            Vec3 um = (m - q) / r, uc = normalized(cand - q);
            for (std::size_t j = 0; j < face.cons_n.size(); ++j) {
                if (static_cast<int>(j) == lets[el].border_cons) continue;
                double sm = dot(um, face.cons_n[j]) - face.cons_b[j];
                double sc = dot(uc, face.cons_n[j]) - face.cons_b[j];
                if (std::abs(sm) > 1e-9 && sm * sc < 0) return false;
            }
            for (auto& c : curves) {
                if (!lets[el].is_border && lets[el].source == c.source) continue;
                double dm = dist(m, c.source_point) - r, dc = dist(cand, c.source_point) - r;
                if (std::abs(dm) > 1e-9 && dm * dc < 0) return false;
            }
            return true;
        };
        auto side_sample = [&](int el, bool left_side) -> std::optional<Point3> {
            const Arc3& a = lets[el].arc;
            double tm = 0.5 * (a.theta0 + a.theta1);
            Point3 m = a.circle.point_at(tm);
            auto [ce1, ce2] = a.circle.frame();
            Vec3 dtan = (ce2 * std::cos(tm) - ce1 * std::sin(tm));
            Vec3 radial = normalized(m - q);
            Vec3 tang = dtan - radial * dot(dtan, radial);
            if (norm(tang) < 1e-12) return std::nullopt;
            Vec3 side = cross(radial, normalized(tang));
            if (!left_side) side = -side;
            double span = std::min(0.05 * r, 0.25 * (a.theta1 - a.theta0) *
                                                 std::max(a.circle.radius, 1e-9));
            span = std::max(span, 1e-8 * r);
            for (int attempt = 0; attempt < 16; ++attempt) {
                double delta = span * std::pow(0.5, attempt);
                Point3 cand = q + normalized((m + side * delta) - q) * r;
                if (side_ok(cand, m, el)) return cand;
            }
            return std::nullopt;
        };

        // stitch isolated components: shoot a great-circle ray from a side
        // sample and merge with the facing class of the first crossing
        if (ncomp > 1) {
            std::vector<Point3> targets;
            for (int el = 0; el < ne && static_cast<int>(targets.size()) < 6; ++el)
                if (lets[el].is_border) targets.push_back(lets[el].arc.midpoint());
            for (int el = 0; el < ne && static_cast<int>(targets.size()) < 6; ++el)
                targets.push_back(lets[el].arc.point_at_param(0.37));
            for (int c = 0; c < ncomp; ++c) {
                int el0 = -1;
                for (int el = 0; el < ne; ++el)
                    if (comp[el] == c) { el0 = el; break; }
                for (bool side0 : {true, false}) {
                    auto w_opt = side_sample(el0, side0);
                    if (!w_opt) continue;
                    Point3 w = *w_opt;
                    int own_class = find(side0 ? left_slot(el0) : right_slot(el0));
                    bool merged = false;
                    for (auto& target : targets) {
                        if (merged) break;
                        Vec3 gn = cross(w - q, target - q);
                        if (norm(gn) < 1e-10) continue;
                        Circle3 ray(q, r, Direction(normalized(gn)));
                        double tw = ray.angle_of(w);
                        int best_el = -1;
                        double best_t = 1e30;
                        bool best_left = true;
                        for (int el = 0; el < ne; ++el) {
                            Point3 hits[2];
                            int nh = detail_sm::circle_circle_on_sphere(q, r, ray,
                                                                        lets[el].arc.circle, hits);
                            for (int h = 0; h < nh; ++h) {
                                double te = lets[el].arc.circle.angle_of(hits[h]);
                                if (!detail_sm::angle_in_arc(te, lets[el].arc.theta0,
                                                             lets[el].arc.theta1, 1e-9))
                                    continue;
                                double tray = wrap_angle(ray.angle_of(hits[h]) - tw);
                                if (tray < 1e-7 || tray > kTwoPi - 1e-7) continue;
                                if (tray < best_t) {
                                    best_t = tray;
                                    best_el = el;
                                    Vec3 radial = normalized(hits[h] - q);
                                    auto [ce1, ce2] = lets[el].arc.circle.frame();
                                    double th = lets[el].arc.circle.angle_of(hits[h]);
                                    Vec3 etan = (ce2 * std::cos(th) - ce1 * std::sin(th));
                                    etan = etan - radial * dot(etan, radial);
                                    Vec3 raydir = cross(ray.normal.v, radial);
                                    Vec3 leftn = cross(radial, normalized(etan));
                                    best_left = dot(raydir, leftn) < 0; // side facing w
                                }
                            }
                        }
                        if (best_el < 0) continue;
                        int facing = find(best_left ? left_slot(best_el) : right_slot(best_el));
                        if (facing != own_class) {
                            unite(own_class, facing);
                            merged = true;
                        } else if (comp[best_el] != c) {
                            merged = true; // same cell already; nothing to do
                        }
                    }
                }
            }
        }

        // collect cells: representative slot samples, drop exterior classes
        std::map<int, Point3> class_rep;
        std::map<int, bool> class_exterior;
        for (int el = 0; el < ne; ++el)
            for (bool left : {true, false}) {
                int cls = find(left ? left_slot(el) : right_slot(el));
                auto s = side_sample(el, left);
                if (!s) continue;
                bool inside = sig.face_contains_dir(face, (*s - q) / r, 1e-9);
                if (lets[el].is_border && !inside) {
                    class_exterior[cls] = true;
                    continue;
                }
                if (!class_rep.count(cls) && inside) class_rep[cls] = *s;
            }

        // --- emit nodes ---
        std::map<int, int> cell_node, vertex_node;
        for (auto& [cls, rep] : class_rep) {
            if (class_exterior.count(cls)) continue;
            MapMNode node;
            node.kind = MapMNode::Kind::Cell;
            node.face = fi;
            node.representative = rep;
            node.uncovered = uncovered_of(rep);
            cell_node[cls] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(std::move(node));
            ++out.cell_count;
        }
        for (int v = 0; v < nv; ++v) {
            int gid = global_vdedup.insert(vdedup.points[v]);
            auto it = global_vertex_node.find(gid);
            if (it != global_vertex_node.end()) {
                vertex_node[v] = it->second;
                continue;
            }
            MapMNode node;
            node.kind = MapMNode::Kind::Vertex;
            node.face = fi;
            node.representative = vdedup.points[v];
            node.uncovered = uncovered_of(vdedup.points[v]);
            vertex_node[v] = static_cast<int>(out.nodes.size());
            global_vertex_node[gid] = vertex_node[v];
            out.nodes.push_back(std::move(node));
            ++out.vertex_count;
        }
        for (int el = 0; el < ne; ++el) {
            MapMNode node;
            node.kind = MapMNode::Kind::Edge;
            node.face = fi;
            node.representative = lets[el].arc.midpoint();
            node.uncovered = uncovered_of(node.representative);
            int id = static_cast<int>(out.nodes.size());
            out.nodes.push_back(std::move(node));
            ++out.edge_count;
            edges_graph.push_back({id, vertex_node[lets[el].v0]});
            edges_graph.push_back({id, vertex_node[lets[el].v1]});
            for (bool left : {true, false}) {
                int cls = find(left ? left_slot(el) : right_slot(el));
                auto it = cell_node.find(cls);
                if (it != cell_node.end()) edges_graph.push_back({id, it->second});
            }
        }
        node_offset = static_cast<int>(out.nodes.size());
    }

    out.incidences = std::move(edges_graph);
    for (auto& [key, pts] : pair_hits) {
        PointDedup d(std::max(1e-9, 64.0 * tol.eps(r)));
        for (auto& p : pts) d.insert(p);
        out.max_pair_intersections =
            std::max(out.max_pair_intersections, static_cast<int>(d.points.size()));
        if (static_cast<int>(d.points.size()) > 3)
            throw IntersectionBoundViolated("curve pair intersects sigma more than 3 times");
    }
    return out;
}

// ======================================================================
// Grand tour over the cells, edges and vertices of M
// ======================================================================

struct GrandTourStep {
    int node = -1;
    int toggled = -1; // curve source toggled in/out of the uncovered set, or -1
    bool restart = false;
};

struct GrandTour {
    std::vector<GrandTourStep> steps;
    std::vector<MapMNode> nodes; // map nodes plus any network arcs appended
    int components = 0;
};

// DFS walk over the incidence graph of M, optionally extended by the
// sigma' edge network subdivided at the crossing balls (keeps the tour
// connected when extra constraints disconnect sigma'').  uncovered_fn
// evaluates the uncovered set at network-arc representatives.
inline GrandTour grand_tour(const MapM& map, const SigmaL* sigma_prime = nullptr,
                            const std::vector<Ball>& crossing = {},
                            const std::function<std::vector<int>(const Point3&)>& uncovered_fn = {},
                            const Tolerance& tol = default_tolerance()) {
    GrandTour tour;
    int n = static_cast<int>(map.nodes.size());
    if (n == 0) return tour;

    std::vector<MapMNode> nodes = map.nodes;
    std::vector<std::pair<int, int>> inc = map.incidences;

    // superfluous network arcs from sigma' (outside sigma''), subdivided by
    // the crossing balls, glued by endpoint proximity
    if (sigma_prime && !sigma_prime->degenerate) {
        double r = sigma_prime->r;
        PointDedup ends(std::max(1e-9, 64.0 * tol.eps(r)));
        std::vector<std::vector<int>> end_nodes;
        auto link_end = [&](const Point3& p, int node) {
            int before = static_cast<int>(ends.points.size());
            int id = ends.insert(p);
            if (id == before) end_nodes.push_back({});
            end_nodes[id].push_back(node);
        };
        for (int i = 0; i < n; ++i)
            if (nodes[i].kind == MapMNode::Kind::Vertex) link_end(nodes[i].representative, i);
        for (auto& sarc : sigma_prime->arcs) {
            const Circle3& c = sarc.arc.circle;
            auto [e1, e2] = c.frame();
            std::vector<double> cuts{sarc.arc.theta0, sarc.arc.theta1};
            for (auto& b : crossing) {
                AngleSet s = AngleSet::whole();
                clip_circle(s, CircleConstraint::inside_ball(c.center, c.radius, e1, e2, b.center,
                                                             b.radius));
                if (s.full || s.is_empty()) continue;
                for (auto& [st, len] : s.arcs) {
                    for (double t : {st, st + len}) {
                        double rel = wrap_angle(t - sarc.arc.theta0);
                        if (rel > 1e-9 && rel < sarc.arc.theta1 - sarc.arc.theta0 - 1e-9)
                            cuts.push_back(sarc.arc.theta0 + rel);
                    }
                }
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                if (cuts[s + 1] - cuts[s] < 1e-9) continue;
                MapMNode node;
                node.kind = MapMNode::Kind::Edge;
                node.face = sarc.face;
                Arc3 piece(c, cuts[s], cuts[s + 1]);
                node.representative = piece.midpoint();
                if (uncovered_fn) node.uncovered = uncovered_fn(node.representative);
                int id = static_cast<int>(nodes.size());
                nodes.push_back(std::move(node));
                link_end(piece.start(), id);
                link_end(piece.end(), id);
            }
        }
        for (auto& group : end_nodes)
            for (std::size_t i = 1; i < group.size(); ++i) inc.push_back({group[0], group[i]});
    }

    int total = static_cast<int>(nodes.size());
    std::vector<std::vector<int>> adj(total);
    for (auto& [a, b] : inc) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> visited(total, false);
    auto diff_one = [&](const std::vector<int>& a, const std::vector<int>& b) -> int {
        // returns the single toggled source, -1 if equal, -2 if diff > 1
        int toggle = -1;
        std::size_t i = 0, j = 0;
        int diffs = 0;
        while (i < a.size() || j < b.size()) {
            if (i < a.size() && j < b.size() && a[i] == b[j]) { ++i; ++j; continue; }
            if (j >= b.size() || (i < a.size() && a[i] < b[j])) { toggle = a[i]; ++i; }
            else { toggle = b[j]; ++j; }
            if (++diffs > 1) return -2;
        }
        return diffs == 0 ? -1 : toggle;
    };

    tour.nodes = nodes;
    for (int start = 0; start < total; ++start) {
        if (visited[start] || start >= n) continue; // only map nodes seed tours
        if (!tour.steps.empty()) tour.steps.push_back({start, -1, true});
        else tour.steps.push_back({start, -1, false});
        ++tour.components;
        visited[start] = true;
        std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
        while (!stack.empty()) {
            auto& [cur, next] = stack.back();
            if (next >= adj[cur].size()) {
                stack.pop_back();
                if (!stack.empty()) {
                    int back = stack.back().first;
                    int t = diff_one(nodes[cur].uncovered, nodes[back].uncovered);
                    tour.steps.push_back({back, t == -2 ? -1 : t, t == -2});
                }
                continue;
            }
            int nxt = adj[cur][next++];
            if (visited[nxt]) continue;
            visited[nxt] = true;
            int t = diff_one(nodes[cur].uncovered, nodes[nxt].uncovered);
            tour.steps.push_back({nxt, t == -2 ? -1 : t, t == -2});
            stack.push_back({nxt, 0});
        }
    }
    return tour;
}

} // namespace twocenter
