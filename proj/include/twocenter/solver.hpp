#pragma once

#include "arrangement.hpp"
#include "lifespan_tree.hpp"
#include "miniball.hpp"
#include "spherical_polytope.hpp"
#include "surface_map.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace twocenter {

// ======================================================================
// Outcomes, configuration
// ======================================================================

enum class DecisionVariant { StrictlyCoverable, ExactlyCritical, NotCoverable };

struct DecisionOutcome {
    DecisionVariant variant = DecisionVariant::NotCoverable;
    bool has_witness = false;
    Point3 c1, c2;
    std::vector<int> side1, side2; // indices covered by c1 / c2
};

enum class Algorithm { Cubic, Improved, BruteForce, Auto };
enum class LeafPredicate { Miniball, Polytope };

struct SolverStats {
    long long cells_visited = 0;
    long long m_vertices = 0;
    long long guesses = 0;
    long long decisions = 0;
    long long perturbations = 0;
    int exp_search_steps = 0;
    double beta_used = 0.0;
};

struct SolverConfig {
    Algorithm algorithm = Algorithm::Auto;
    LeafPredicate predicate = LeafPredicate::Miniball;
    double epsilon = 0.0;
    int rho = 4;
    int levels = 1; // Chan level compression: effective cutting parameter rho^levels
    double beta_floor = 0.05;
    bool snap_to_candidates = true;
    std::uint64_t seed = 1;
    Tolerance tol{};
    SolverStats* stats = nullptr;
};

struct TwoCenterSolution {
    Point3 c1, c2;
    double radius = 0.0;
    std::vector<int> side1, side2;
    bool approximate = false;
    EnclosingBall seb;              // filled for approximate answers
    Algorithm algorithm_used = Algorithm::Auto;
    double beta_used = 0.0;
    int exp_search_steps = 0;
    std::uint64_t seed = 0;
};

namespace detail_sv {

inline double side_radius(const std::vector<Point3>& pts, const std::vector<int>& ids,
                          std::uint64_t seed, Point3* center = nullptr) {
    if (ids.empty()) {
        if (center) *center = Point3{0, 0, 0};
        return 0.0;
    }
    auto seb = smallest_enclosing_ball_of(pts, ids, seed);
    if (center) *center = seb.center;
    return seb.radius;
}

inline DecisionVariant classify_radius(double r, double rstar, const Tolerance& tol) {
    double e = tol.eps(r, rstar);
    if (r < rstar - e) return DecisionVariant::NotCoverable;
    if (r <= rstar + e) return DecisionVariant::ExactlyCritical;
    return DecisionVariant::StrictlyCoverable;
}

struct BestPartition {
    double radius = std::numeric_limits<double>::infinity();
    std::vector<int> side1, side2;
    Point3 c1, c2;
};

// Exhaustive bipartition minimum (exact for n <= ~16).
inline BestPartition best_partition_exhaustive(const std::vector<Point3>& pts,
                                               std::uint64_t seed) {
    int n = static_cast<int>(pts.size());
    BestPartition best;
    std::uint32_t total = n >= 1 ? (1u << (n - 1)) : 1u;
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        std::vector<int> s1, s2;
        for (int i = 0; i < n; ++i)
            (mask & (1u << i)) ? s1.push_back(i) : s2.push_back(i);
        Point3 c1, c2;
        double r1 = side_radius(pts, s1, seed, &c1);
        double r2 = side_radius(pts, s2, seed, &c2);
        double r = std::max(r1, r2);
        if (r < best.radius) {
            best.radius = r;
            best.side1 = s1;
            best.side2 = s2;
            best.c1 = s1.empty() ? c2 : c1;
            best.c2 = s2.empty() ? c1 : c2;
        }
    }
    return best;
}

// Plane-induced bipartitions: triple normals with orientation jitter,
// prefix splits along each normal.
inline BestPartition best_partition_planes(const std::vector<Point3>& pts, std::uint64_t seed) {
    int n = static_cast<int>(pts.size());
    BestPartition best;
    Rng rng(derive_seed(seed, 0xB1B));
    std::vector<Vec3> normals;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            normals.push_back(pts[j] - pts[i]);
            for (int k = j + 1; k < n; ++k) {
                Vec3 c = cross(pts[j] - pts[i], pts[k] - pts[i]);
                if (norm(c) > 1e-12) normals.push_back(c);
            }
        }
    normals.push_back({1, 0, 0});
    std::vector<std::pair<double, int>> proj(n);
    auto consider_normal = [&](Vec3 nr) {
        double len = norm(nr);
        if (len < 1e-12) return;
        nr = nr / len;
        for (int i = 0; i < n; ++i) proj[i] = {dot(nr, pts[i]), i};
        std::sort(proj.begin(), proj.end());
        std::vector<int> s1;
        std::vector<int> s2;
        for (int k = 0; k <= n; ++k) {
            s1.clear();
            s2.clear();
            for (int i = 0; i < k; ++i) s1.push_back(proj[i].second);
            for (int i = k; i < n; ++i) s2.push_back(proj[i].second);
            std::sort(s1.begin(), s1.end());
            std::sort(s2.begin(), s2.end());
            Point3 c1, c2;
            double r = std::max(side_radius(pts, s1, seed, &c1), side_radius(pts, s2, seed, &c2));
            if (r < best.radius) {
                best.radius = r;
                best.side1 = s1;
                best.side2 = s2;
                best.c1 = c1;
                best.c2 = c2;
            }
        }
    };
    for (auto& nr : normals) {
        consider_normal(nr);
        for (int j = 0; j < 4; ++j)
            consider_normal(nr + Vec3{rng.uniform(-1e-5, 1e-5), rng.uniform(-1e-5, 1e-5),
                                      rng.uniform(-1e-5, 1e-5)} * norm(nr));
    }
    return best;
}

inline BestPartition best_partition(const std::vector<Point3>& pts, std::uint64_t seed) {
    if (pts.size() <= 16) return best_partition_exhaustive(pts, seed);
    return best_partition_planes(pts, seed);
}

inline DecisionOutcome outcome_from_partition(const BestPartition& best, double r,
                                              const Tolerance& tol) {
    DecisionOutcome out;
    out.variant = classify_radius(r, best.radius, tol);
    if (out.variant != DecisionVariant::NotCoverable) {
        out.has_witness = true;
        out.c1 = best.c1;
        out.c2 = best.c2;
        out.side1 = best.side1;
        out.side2 = best.side2;
    }
    return out;
}

} // namespace detail_sv

// ======================================================================
// Reference decision and optimization (desk-scale oracles)
// ======================================================================

inline DecisionOutcome brute_force_decide(const std::vector<Point3>& P, double r,
                                          const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    auto best = detail_sv::best_partition(P, cfg.seed);
    return detail_sv::outcome_from_partition(best, r, cfg.tol);
}

inline TwoCenterSolution optimize_reference(const std::vector<Point3>& P,
                                            const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    auto radii = candidate_radii(P, cfg.tol);
    // binary search: smallest candidate radius that is coverable
    int lo = 0, hi = static_cast<int>(radii.size()) - 1;
    auto coverable = [&](double r) {
        return brute_force_decide(P, r, cfg).variant != DecisionVariant::NotCoverable;
    };
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (coverable(radii[mid])) hi = mid;
        else lo = mid + 1;
    }
    auto best = detail_sv::best_partition(P, cfg.seed);
    TwoCenterSolution sol;
    sol.radius = best.radius;
    sol.c1 = best.c1;
    sol.c2 = best.c2;
    sol.side1 = best.side1;
    sol.side2 = best.side2;
    sol.algorithm_used = Algorithm::BruteForce;
    sol.seed = cfg.seed;
    (void)radii[lo];
    return sol;
}

// ======================================================================
// Leaf predicates over ball families
// ======================================================================

namespace detail_sv {

struct LeafStatus {
    IntersectionStatus status = IntersectionStatus::Unconstrained;
    Point3 witness;
};

// Evaluates emptiness of intersections of congruent balls around subsets of
// P, either through the miniball identity or through the spherical-polytope
// engine with per-tree-node precomputed polytopes.
struct LeafEvaluator {
    const std::vector<Point3>* pts = nullptr;
    std::vector<Point3> extra; // globally committed centers (Chan G-sets)
    double r = 0.0;
    LeafPredicate kind = LeafPredicate::Miniball;
    const SpanTree* tree = nullptr;
    Tolerance tol;
    std::uint64_t seed = 0;
    // polytope path state
    std::map<int, std::optional<MappedPolytope>> node_poly;
    std::optional<MappedPolytope> root_poly;
    bool root_built = false;

    LeafStatus eval(const std::vector<int>& items, const std::vector<int>& path) {
        if (kind == LeafPredicate::Miniball || tree == nullptr) {
            std::vector<Point3> centers = extra;
            for (int i : items) centers.push_back((*pts)[i]);
            if (centers.empty()) return {IntersectionStatus::Unconstrained, Point3{}};
            auto st = balls_intersection_status(centers, r, tol, seed);
            return {st.status, st.witness};
        }
        // polytope path: one polytope per segment-tree node on the path
        std::vector<MappedPolytope> polys;
        if (!extra.empty()) {
            if (!root_built) {
                std::vector<Ball> balls;
                for (auto& c : extra) balls.emplace_back(c, r);
                auto p = build_polytope(balls, tol, seed);
                if (p) root_poly = make_mapped(std::move(*p), tol);
                root_built = true;
            }
            if (!root_poly.has_value() && !extra.empty())
                return {IntersectionStatus::Empty, Point3{}};
            if (root_poly) polys.push_back(*root_poly);
        }
        bool any = !polys.empty();
        for (int node : path) {
            const auto& node_items = tree->node_items[node];
            if (node_items.empty()) continue;
            any = true;
            auto it = node_poly.find(node);
            if (it == node_poly.end()) {
                std::vector<Ball> balls;
                for (int i : node_items) balls.emplace_back((*pts)[i], r);
                auto p = build_polytope(balls, tol, seed);
                it = node_poly.emplace(node, p ? std::optional<MappedPolytope>(
                                                     make_mapped(std::move(*p), tol))
                                               : std::nullopt)
                         .first;
            }
            if (!it->second.has_value()) return {IntersectionStatus::Empty, Point3{}};
            polys.push_back(*it->second);
        }
        if (!any) return {IntersectionStatus::Unconstrained, Point3{}};
        auto res = pi2_emptiness(polys, tol);
        if (res.kind == Pi2Result::Kind::Empty) return {IntersectionStatus::Empty, Point3{}};
        return {res.degenerate ? IntersectionStatus::Degenerate : IntersectionStatus::FullDim,
                res.point};
    }
};

inline bool nonempty(IntersectionStatus s) { return s != IntersectionStatus::Empty; }
inline bool strictish(IntersectionStatus s) {
    return s == IntersectionStatus::FullDim || s == IntersectionStatus::Unconstrained;
}

} // namespace detail_sv

// ======================================================================
// Near-cubic decision procedure
// ======================================================================

namespace detail_sv {

// Cubic-style decision with optional globally committed sides (used both by
// decide_cubic and by the Chan recursion's subproblems).
inline DecisionOutcome decide_cubic_impl(const std::vector<Point3>& all,
                                         const std::vector<int>& local,
                                         const std::vector<int>& g_plus,
                                         const std::vector<int>& g_minus, double r,
                                         const SolverConfig& cfg) {
    DecisionOutcome out;
    const Tolerance& tol = cfg.tol;

    auto finish_sides = [&](const std::vector<int>& m_plus, const std::vector<int>& m_minus,
                            const LeafStatus& sp, const LeafStatus& sm) {
        DecisionOutcome o;
        o.has_witness = true;
        o.side1 = g_plus;
        o.side1.insert(o.side1.end(), m_plus.begin(), m_plus.end());
        o.side2 = g_minus;
        o.side2.insert(o.side2.end(), m_minus.begin(), m_minus.end());
        std::sort(o.side1.begin(), o.side1.end());
        std::sort(o.side2.begin(), o.side2.end());
        o.c1 = sp.status == IntersectionStatus::Unconstrained ? sm.witness : sp.witness;
        o.c2 = sm.status == IntersectionStatus::Unconstrained ? sp.witness : sm.witness;
        return o;
    };

    std::vector<Point3> local_pts;
    for (int i : local) local_pts.push_back(all[i]);

    // Perturbation fallback for degenerate dual arrangements.
    std::vector<Plane> duals;
    std::vector<Cell> cells;
    std::vector<Point3> used = local_pts;
    for (int attempt = 0;; ++attempt) {
        duals.clear();
        for (auto& p : used) duals.push_back(dualize_point(p));
        try {
            cells = enumerate_cells(duals, tol);
            break;
        } catch (const DegenerateArrangement&) {
            if (attempt >= 4) throw;
            if (cfg.stats) ++cfg.stats->perturbations;
            double diam = 1.0;
            for (auto& p : local_pts) diam = std::max(diam, 2.0 * norm(p));
            Rng jit(derive_seed(cfg.seed, 7700 + attempt));
            double mag = 1e-7 * diam * std::pow(8.0, attempt);
            used = local_pts;
            for (auto& p : used)
                p += Vec3{jit.uniform(-mag, mag), jit.uniform(-mag, mag), jit.uniform(-mag, mag)};
        }
    }
    if (cfg.stats) cfg.stats->cells_visited += static_cast<long long>(cells.size());

    CellTour tour = build_tour(cells);
    int L = static_cast<int>(tour.steps.size());
    std::vector<bool> init(local.size());
    if (!cells.empty())
        for (std::size_t i = 0; i < local.size(); ++i)
            init[i] = cells[tour.steps[0].cell].signs[i] > 0;
    auto spans = compute_spans(tour, init);
    auto t_plus = build_span_tree(spans.plus, L);
    auto t_minus = build_span_tree(spans.minus, L);

    LeafEvaluator ev_plus{&all, {}, r, cfg.predicate, &t_plus, tol, derive_seed(cfg.seed, 11)};
    LeafEvaluator ev_minus{&all, {}, r, cfg.predicate, &t_minus, tol, derive_seed(cfg.seed, 12)};
    for (int i : g_plus) ev_plus.extra.push_back(all[i]);
    for (int i : g_minus) ev_minus.extra.push_back(all[i]);

    // Remap tree item ids (positions in `local`) to global indices once.
    auto to_global = [&](const std::vector<int>& items) {
        std::vector<int> g;
        g.reserve(items.size());
        for (int i : items) g.push_back(local[i]);
        return g;
    };

    std::vector<LeafStatus> plus_status(L), minus_status(L);
    std::vector<std::vector<int>> plus_members(L);
    walk_leaves(t_plus, [&](int leaf, const std::vector<int>& items, const std::vector<int>& path) {
        auto g = to_global(items);
        plus_status[leaf] = ev_plus.eval(g, path);
        plus_members[leaf] = std::move(g);
    });
    walk_leaves(t_minus, [&](int leaf, const std::vector<int>& items, const std::vector<int>& path) {
        minus_status[leaf] = ev_minus.eval(to_global(items), path);
    });
    if (cfg.stats) cfg.stats->decisions += 1;

    int critical_leaf = -1;
    for (int leaf = 0; leaf < L; ++leaf) {
        const auto& sp = plus_status[leaf];
        const auto& sm = minus_status[leaf];
        if (!nonempty(sp.status) || !nonempty(sm.status)) continue;
        if (strictish(sp.status) && strictish(sm.status)) {
            std::vector<int> m_minus;
            for (int i : local)
                if (std::find(plus_members[leaf].begin(), plus_members[leaf].end(), i) ==
                    plus_members[leaf].end())
                    m_minus.push_back(i);
            out = finish_sides(plus_members[leaf], m_minus, sp, sm);
            out.variant = DecisionVariant::StrictlyCoverable;
            return out;
        }
        if (critical_leaf < 0) critical_leaf = leaf;
    }
    if (critical_leaf >= 0) {
        std::vector<int> m_minus;
        for (int i : local)
            if (std::find(plus_members[critical_leaf].begin(), plus_members[critical_leaf].end(),
                          i) == plus_members[critical_leaf].end())
                m_minus.push_back(i);
        out = finish_sides(plus_members[critical_leaf], m_minus, plus_status[critical_leaf],
                           minus_status[critical_leaf]);
        out.variant = DecisionVariant::ExactlyCritical;
        return out;
    }
    out.variant = DecisionVariant::NotCoverable;
    return out;
}

} // namespace detail_sv

inline DecisionOutcome decide_cubic(const std::vector<Point3>& P, double r,
                                    const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    if (r <= 0.0) throw GeometryError("decide_cubic needs r > 0");
    std::vector<int> ids(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) ids[i] = static_cast<int>(i);
    return detail_sv::decide_cubic_impl(P, ids, {}, {}, r, cfg);
}

// ======================================================================
// Improved decision procedure (Gamma)
// ======================================================================

inline double beta_lower_bound(double r, double r0, double floor_value = 1e-9) {
    const Tolerance tol;
    if (r > r0 * (1.0 + 1e-12) + tol.eps_abs)
        throw InvalidRadius("r exceeds the enclosing-ball radius; decision is trivial");
    if (r <= 0.0) throw InvalidRadius("r must be positive");
    double beta = 2.0 * (r0 / r - 1.0);
    return std::clamp(beta, floor_value, 2.0);
}

namespace detail_sv {

// Improved decision with optional global commitments: G_left rides with the
// left ball B1, G_right with B2.  Valid under the beta separation promise.
inline DecisionOutcome decide_improved_impl(const std::vector<Point3>& all,
                                            const std::vector<int>& local,
                                            const std::vector<int>& g_left,
                                            const std::vector<int>& g_right, double r, double beta,
                                            const SolverConfig& cfg) {
    const Tolerance& tol = cfg.tol;
    double e = tol.eps(r);
    DecisionOutcome critical;
    bool have_critical = false;

    auto validated = [&](DecisionOutcome& o) {
        double worst = 0.0;
        for (int i : o.side1) worst = std::max(worst, dist(all[i], o.c1));
        for (int i : o.side2) worst = std::max(worst, dist(all[i], o.c2));
        return worst <= r + 1e3 * e;
    };
    auto record_critical = [&](DecisionOutcome o) {
        o.variant = DecisionVariant::ExactlyCritical;
        if (!have_critical && validated(o)) {
            critical = std::move(o);
            have_critical = true;
        }
    };

    auto dirs = canonical_directions(beta);
    std::uint64_t seb_seed = derive_seed(cfg.seed, 21);

    for (std::size_t di = 0; di < dirs.size(); ++di) {
        Frame3 frame = Frame3::with_x_axis(dirs[di]);
        std::vector<Point3> rot(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) rot[i] = frame.apply(all[i]);

        double xmin = 1e300, xmax = -1e300;
        for (int i : local) {
            xmin = std::min(xmin, rot[i].x);
            xmax = std::max(xmax, rot[i].x);
        }
        for (int i : g_left) {
            xmin = std::min(xmin, rot[i].x);
            xmax = std::max(xmax, rot[i].x);
        }
        for (int i : g_right) {
            xmin = std::min(xmin, rot[i].x);
            xmax = std::max(xmax, rot[i].x);
        }

        auto try_bipartition = [&](const std::vector<int>& left_ids,
                                   const std::vector<int>& right_ids) -> bool {
            Point3 c1, c2;
            double rl = side_radius(all, left_ids, seb_seed, &c1);
            double rr = side_radius(all, right_ids, seb_seed, &c2);
            if (std::max(rl, rr) > r + e) return false;
            DecisionOutcome o;
            o.has_witness = true;
            o.c1 = left_ids.empty() ? c2 : c1;
            o.c2 = right_ids.empty() ? c1 : c2;
            o.side1 = left_ids;
            o.side2 = right_ids;
            if (std::max(rl, rr) < r - e) {
                o.variant = DecisionVariant::StrictlyCoverable;
                critical = std::move(o);
                have_critical = true;
                return true; // strict
            }
            record_critical(std::move(o));
            return false;
        };

        // Large x-span: a clean prefix bipartition exists when coverable.
        double span = xmax - xmin;
        std::vector<std::pair<double, int>> xs;
        for (int i : local) xs.push_back({rot[i].x, i});
        std::sort(xs.begin(), xs.end());
        if (span > 5.0 * r) {
            if (cfg.stats) ++cfg.stats->guesses;
            for (std::size_t k = 0; k <= xs.size(); ++k) {
                std::vector<int> left = g_left, right = g_right;
                for (std::size_t i = 0; i < xs.size(); ++i)
                    (i < k ? left : right).push_back(xs[i].second);
                std::sort(left.begin(), left.end());
                std::sort(right.begin(), right.end());
                if (try_bipartition(left, right)) {
                    critical.variant = DecisionVariant::StrictlyCoverable;
                    return critical;
                }
            }
            continue;
        }

        // lambda grid with spacing beta r / 4, deduplicated by induced P_L
        std::vector<double> lambdas;
        double step = beta * r / 4.0;
        std::size_t last_size = static_cast<std::size_t>(-1);
        for (double lam = xmin + step; lam <= xmax + step; lam += step) {
            std::size_t cnt = 0;
            while (cnt < xs.size() && xs[cnt].first <= lam) ++cnt;
            if (cnt == last_size) continue;
            last_size = cnt;
            lambdas.push_back(lam);
        }
        for (double lam : lambdas) {
            if (cfg.stats) ++cfg.stats->guesses;
            // the B2-committed globals may not lie left of lambda
            bool aborted = false;
            for (int i : g_right)
                if (rot[i].x <= lam) { aborted = true; break; }
            if (aborted) continue;

            std::vector<int> pl_ids, pr_ids;
            for (int i : local) (rot[i].x <= lam ? pl_ids : pr_ids).push_back(i);
            if (pl_ids.empty()) continue;

            std::vector<int> left_all = g_left;
            left_all.insert(left_all.end(), pl_ids.begin(), pl_ids.end());
            std::sort(left_all.begin(), left_all.end());
            std::vector<int> right_all = g_right;
            right_all.insert(right_all.end(), pr_ids.begin(), pr_ids.end());
            std::sort(right_all.begin(), right_all.end());

            if (side_radius(all, left_all, seb_seed) > r + e) continue; // K empty
            if (try_bipartition(left_all, right_all)) return critical;

            // sigma search: K over the left-of-lambda commitments, clipped
            // inside the balls of the remaining left-committed points
            std::vector<Point3> kset;
            std::vector<int> kset_ids;
            for (int i : pl_ids) {
                kset.push_back(rot[i]);
                kset_ids.push_back(i);
            }
            std::vector<Ball> extra;
            for (int i : g_left) {
                if (rot[i].x <= lam) {
                    kset.push_back(rot[i]);
                    kset_ids.push_back(i);
                } else {
                    extra.push_back(Ball(rot[i], r));
                }
            }
            Plane lambda_plane(Direction(Vec3{1, 0, 0}), lam);
            std::optional<SigmaL> sigma2, sigma1;
            try {
                sigma2 = build_sigma(kset, r, lambda_plane, extra, tol, derive_seed(cfg.seed, di));
                if (!sigma2) continue;
                sigma1 = extra.empty()
                             ? std::nullopt
                             : build_sigma(kset, r, lambda_plane, {}, tol,
                                           derive_seed(cfg.seed, di));
            } catch (const GeometryError&) {
                continue;
            }

            // uncovered candidates: local points right of lambda
            auto uncovered_to_status = [&](const std::vector<int>& u) {
                std::vector<Point3> centers;
                for (int i : g_right) centers.push_back(rot[i]);
                for (int i : u) centers.push_back(rot[i]);
                if (centers.empty())
                    return LeafStatus{IntersectionStatus::Unconstrained, Point3{}};
                auto st = balls_intersection_status(centers, r, tol, seb_seed);
                return LeafStatus{st.status, st.witness};
            };
            auto emit_solution = [&](const Point3& c1_rot, const std::vector<int>& uncovered,
                                     const LeafStatus& right_status, bool strict) -> bool {
                DecisionOutcome o;
                o.has_witness = true;
                o.c1 = frame.apply_inverse(c1_rot);
                o.c2 = right_status.status == IntersectionStatus::Unconstrained
                           ? o.c1
                           : frame.apply_inverse(right_status.witness);
                std::vector<bool> unc(all.size(), false);
                for (int i : uncovered) unc[i] = true;
                for (int i : local) ((unc[i]) ? o.side2 : o.side1).push_back(i);
                for (int i : g_left) o.side1.push_back(i);
                for (int i : g_right) o.side2.push_back(i);
                std::sort(o.side1.begin(), o.side1.end());
                std::sort(o.side2.begin(), o.side2.end());
                if (!validated(o)) return false;
                if (strict) {
                    o.variant = DecisionVariant::StrictlyCoverable;
                    critical = std::move(o);
                    have_critical = true;
                    return true;
                }
                record_critical(std::move(o));
                return false;
            };

            if (sigma2->degenerate) {
                Point3 w = sigma2->degenerate_point;
                std::vector<int> u;
                for (int i : pr_ids)
                    if (dist(w, rot[i]) > r + e) u.push_back(i);
                auto st = uncovered_to_status(u);
                if (nonempty(st.status)) {
                    if (emit_solution(w, u, st, false)) return critical;
                }
                continue;
            }

            std::vector<GammaCurve> curves;
            for (int i : pr_ids) curves.push_back(gamma_curve(rot[i], *sigma2, i, tol));

            MapM map;
            try {
                map = build_map(*sigma2, curves, tol);
            } catch (const DegeneracyDetected&) {
                continue;
            }
            if (cfg.stats) cfg.stats->m_vertices += map.vertex_count;

            auto uncovered_fn = [&](const Point3& x) {
                std::vector<int> u;
                for (auto& c : curves)
                    if (dist(x, c.source_point) > r + e) u.push_back(c.source);
                return u;
            };
            auto tour = grand_tour(map, sigma1 ? &*sigma1 : &*sigma2,
                                   [&] {
                                       std::vector<Ball> cb;
                                       for (int i : pr_ids) cb.emplace_back(rot[i], r);
                                       for (auto& b : extra) cb.push_back(b);
                                       return cb;
                                   }(),
                                   uncovered_fn, tol);
            int T = static_cast<int>(tour.steps.size());
            if (T == 0) continue;

            // life-spans of the uncovered sets along the tour
            std::vector<LifeSpan> spans;
            {
                std::map<int, int> open; // source -> start position
                std::vector<int> prev;
                for (int t = 0; t < T; ++t) {
                    const auto& cur = tour.nodes[tour.steps[t].node].uncovered;
                    for (int s : prev)
                        if (!std::binary_search(cur.begin(), cur.end(), s)) {
                            spans.push_back({s, open[s], t});
                            open.erase(s);
                        }
                    for (int s : cur)
                        if (!open.count(s)) open[s] = t;
                    prev = cur;
                }
                for (auto& [s, start] : open) spans.push_back({s, start, T});
            }
            // remap sources (global ids) to dense ids for the tree
            std::map<int, int> dense;
            std::vector<int> dense_to_global;
            for (auto& sp : spans)
                if (!dense.count(sp.item)) {
                    dense[sp.item] = static_cast<int>(dense_to_global.size());
                    dense_to_global.push_back(sp.item);
                }
            for (auto& sp : spans) sp.item = dense[sp.item];
            auto tree = build_span_tree(spans, T);

            bool found_strict = false;
            DecisionOutcome strict_out;
            walk_leaves(tree, [&](int leaf, const std::vector<int>& items,
                                  const std::vector<int>&) {
                if (found_strict) return;
                const MapMNode& node = tour.nodes[tour.steps[leaf].node];
                std::vector<int> u;
                for (int it : items) u.push_back(dense_to_global[it]);
                std::sort(u.begin(), u.end());
                auto st = uncovered_to_status(u);
                if (!nonempty(st.status)) return;
                bool left_nondeg = node.kind != MapMNode::Kind::Vertex;
                if (node.kind == MapMNode::Kind::Vertex) {
                    // covered side: everything except the uncovered locals
                    std::vector<Point3> left_centers;
                    std::vector<bool> unc(all.size(), false);
                    for (int i : u) unc[i] = true;
                    for (int i : left_all) left_centers.push_back(rot[i]);
                    for (int i : pr_ids)
                        if (!unc[i]) left_centers.push_back(rot[i]);
                    auto seb = smallest_enclosing_ball(left_centers, seb_seed);
                    left_nondeg = seb.radius < r - e;
                }
                bool strict = strictish(st.status) && left_nondeg;
                if (strict) {
                    DecisionOutcome o;
                    if (emit_solution(node.representative, u, st, true)) {
                        found_strict = true;
                        strict_out = critical;
                        return;
                    }
                    (void)o;
                } else {
                    emit_solution(node.representative, u, st, false);
                }
            });
            if (found_strict) return strict_out;
        }
    }
    if (have_critical) return critical;
    DecisionOutcome out;
    out.variant = DecisionVariant::NotCoverable;
    return out;
}

} // namespace detail_sv

inline DecisionOutcome decide_improved(const std::vector<Point3>& P, double r, double beta,
                                       const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    if (r <= 0.0) throw GeometryError("decide_improved needs r > 0");
    if (!(beta > 0.0) || beta > 2.0) throw InvalidBeta(beta);
    std::vector<int> ids(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) ids[i] = static_cast<int>(i);
    return detail_sv::decide_improved_impl(P, ids, {}, {}, r, beta, cfg);
}

// ======================================================================
// Exponential search and Chan-style optimization
// ======================================================================

namespace detail_sv {

inline DecisionOutcome dispatch_decide(const std::vector<Point3>& P, double r, double r0,
                                       const SolverConfig& cfg) {
    Algorithm alg = cfg.algorithm == Algorithm::Auto ? Algorithm::Improved : cfg.algorithm;
    if (alg == Algorithm::BruteForce) return brute_force_decide(P, r, cfg);
    if (alg == Algorithm::Improved) {
        double beta = beta_lower_bound(std::min(r, r0), r0, 1e-9);
        if (beta >= cfg.beta_floor) {
            if (cfg.stats) cfg.stats->beta_used = beta;
            return decide_improved(P, r, beta, cfg);
        }
        // beta too small: the guess grid would dominate; fall back
    }
    return decide_cubic(P, r, cfg);
}

} // namespace detail_sv

struct ExpSearchResult {
    double r_prime = 0.0;
    int i = 0;
    double r0 = 0.0;
    bool reached_epsilon = false; // stopped by the epsilon rule before success
    bool reached_r0 = false;      // r* is r0 within resolution
    DecisionOutcome outcome;      // decision at r_prime when successful
};

inline ExpSearchResult exponential_search(const std::vector<Point3>& P,
                                          const SolverConfig& cfg = {}) {
    if (P.size() < 1) throw EmptyInput{};
    auto seb = smallest_enclosing_ball(P, derive_seed(cfg.seed, 31));
    ExpSearchResult res;
    res.r0 = seb.radius;
    if (seb.radius <= cfg.tol.eps_abs) {
        res.r_prime = 0.0;
        res.i = 0;
        res.outcome.variant = DecisionVariant::ExactlyCritical;
        res.outcome.has_witness = true;
        res.outcome.c1 = res.outcome.c2 = seb.center;
        for (std::size_t i = 0; i < P.size(); ++i) res.outcome.side1.push_back(static_cast<int>(i));
        return res;
    }
    for (int i = 1; i <= 60; ++i) {
        double r_i = res.r0 * (1.0 - std::pow(0.5, i));
        if (cfg.epsilon > 0.0 && 1.0 - r_i / res.r0 <= cfg.epsilon) {
            res.reached_epsilon = true;
            res.i = i;
            res.r_prime = r_i;
            return res;
        }
        if (cfg.stats) cfg.stats->exp_search_steps = i;
        auto out = detail_sv::dispatch_decide(P, r_i, res.r0, cfg);
        if (out.variant != DecisionVariant::NotCoverable) {
            res.r_prime = r_i;
            res.i = i;
            res.outcome = std::move(out);
            return res;
        }
    }
    res.reached_r0 = true;
    res.r_prime = res.r0;
    res.i = 60;
    return res;
}

namespace detail_sv {

struct ChanState {
    const std::vector<Point3>& P;
    const SolverConfig& cfg;
    double r_best;
    BestPartition best;
    Rng rng;
    int rho_eff;
};

inline void chan_base(ChanState& st, const std::vector<int>& local,
                      const std::vector<int>& g_plus, const std::vector<int>& g_minus) {
    int m = static_cast<int>(local.size());
    std::uint64_t seed = derive_seed(st.cfg.seed, 41);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> s1 = g_plus, s2 = g_minus;
        for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? s1 : s2).push_back(local[i]);
        Point3 c1, c2;
        double r1 = side_radius(st.P, s1, seed, &c1);
        double r2 = side_radius(st.P, s2, seed, &c2);
        double r = std::max(r1, r2);
        if (r < st.best.radius) {
            std::sort(s1.begin(), s1.end());
            std::sort(s2.begin(), s2.end());
            st.best.radius = r;
            st.best.side1 = std::move(s1);
            st.best.side2 = std::move(s2);
            st.best.c1 = c1;
            st.best.c2 = c2;
            st.r_best = std::min(st.r_best, r);
        }
    }
}

inline DecisionOutcome chan_decide_sub(ChanState& st, const std::vector<int>& local,
                                       const std::vector<int>& g_plus,
                                       const std::vector<int>& g_minus, double r) {
    Algorithm alg = st.cfg.algorithm == Algorithm::Auto ? Algorithm::Improved : st.cfg.algorithm;
    if (alg == Algorithm::Improved) {
        auto seb = smallest_enclosing_ball(st.P, derive_seed(st.cfg.seed, 31));
        double beta = beta_lower_bound(std::min(r, seb.radius), seb.radius, 1e-9);
        if (beta >= st.cfg.beta_floor)
            return decide_improved_impl(st.P, local, g_minus, g_plus, r, beta, st.cfg);
    }
    return decide_cubic_impl(st.P, local, g_plus, g_minus, r, st.cfg);
}

inline void chan_recurse(ChanState& st, std::vector<int> local, std::vector<int> g_plus,
                         std::vector<int> g_minus, int depth) {
    int m = static_cast<int>(local.size());
    if (m < std::max(2, st.rho_eff) || depth > 24) {
        chan_base(st, local, g_plus, g_minus);
        return;
    }
    std::vector<Plane> duals;
    for (int i : local) duals.push_back(dualize_point(st.P[i]));
    Cutting cutting;
    try {
        cutting = build_cutting(duals, st.rho_eff, derive_seed(st.cfg.seed, 5000 + depth),
                                st.cfg.tol);
    } catch (const CuttingFailure&) {
        chan_base(st, local, g_plus, g_minus);
        return;
    }
    std::vector<int> order(cutting.simplices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    st.rng.shuffle(order);
    for (int si : order) {
        auto cls = classify_planes(cutting.simplices[si], duals, st.cfg.tol);
        std::vector<int> sub_local, sub_plus = g_plus, sub_minus = g_minus;
        for (int i : cls.crossing) sub_local.push_back(local[i]);
        for (int i : cls.below) sub_plus.push_back(local[i]);
        for (int i : cls.above) sub_minus.push_back(local[i]);
        if (sub_local.size() >= local.size()) {
            chan_base(st, sub_local, sub_plus, sub_minus);
            continue;
        }
        auto gate = chan_decide_sub(st, sub_local, sub_plus, sub_minus, st.r_best);
        if (st.cfg.stats) ++st.cfg.stats->decisions;
        if (gate.variant == DecisionVariant::StrictlyCoverable)
            chan_recurse(st, std::move(sub_local), std::move(sub_plus), std::move(sub_minus),
                         depth + 1);
    }
}

} // namespace detail_sv

inline TwoCenterSolution optimize_chan(const std::vector<Point3>& P, double r_prime,
                                       const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    detail_sv::ChanState st{P, cfg, r_prime, {}, Rng(derive_seed(cfg.seed, 51)),
                            std::max(2, static_cast<int>(std::pow(cfg.rho, cfg.levels)))};
    // seed the current best with the full-set/empty-set split so a witness
    // always exists even when r* equals r_prime
    {
        std::vector<int> all_ids(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) all_ids[i] = static_cast<int>(i);
        Point3 c;
        double r_all = detail_sv::side_radius(P, all_ids, derive_seed(cfg.seed, 41), &c);
        st.best.radius = r_all;
        st.best.side1 = all_ids;
        st.best.c1 = st.best.c2 = c;
        st.r_best = std::min(r_prime, r_all);
    }
    std::vector<int> ids(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) ids[i] = static_cast<int>(i);
    detail_sv::chan_recurse(st, ids, {}, {}, 0);

    TwoCenterSolution sol;
    sol.radius = st.best.radius;
    sol.c1 = st.best.c1;
    sol.c2 = st.best.c2;
    sol.side1 = st.best.side1;
    sol.side2 = st.best.side2;
    sol.algorithm_used = cfg.algorithm;
    sol.seed = cfg.seed;
    return sol;
}

// ======================================================================
// Top-level solve
// ======================================================================

struct SolveResult {
    TwoCenterSolution solution;
    bool approximate = false;
};

inline SolveResult solve(const std::vector<Point3>& P, const SolverConfig& cfg = {}) {
    if (P.empty()) throw EmptyInput{};
    SolveResult res;
    auto seb = smallest_enclosing_ball(P, derive_seed(cfg.seed, 31));

    if (cfg.algorithm == Algorithm::BruteForce) {
        res.solution = optimize_reference(P, cfg);
        res.solution.seed = cfg.seed;
        return res;
    }
    auto search = exponential_search(P, cfg);
    if (cfg.stats) cfg.stats->exp_search_steps = search.i;
    if (search.reached_epsilon) {
        res.approximate = true;
        res.solution.approximate = true;
        res.solution.seb = seb;
        res.solution.c1 = res.solution.c2 = seb.center;
        res.solution.radius = seb.radius;
        for (std::size_t i = 0; i < P.size(); ++i)
            res.solution.side1.push_back(static_cast<int>(i));
        res.solution.algorithm_used = cfg.algorithm;
        res.solution.seed = cfg.seed;
        return res;
    }
    if (search.reached_r0 || search.r0 <= cfg.tol.eps_abs) {
        // r* = r0 within resolution: one ball (duplicated) is optimal
        res.solution.c1 = res.solution.c2 = seb.center;
        res.solution.radius = seb.radius;
        for (std::size_t i = 0; i < P.size(); ++i)
            res.solution.side1.push_back(static_cast<int>(i));
        res.solution.algorithm_used = cfg.algorithm;
        res.solution.seed = cfg.seed;
        res.solution.exp_search_steps = search.i;
        return res;
    }
    res.solution = optimize_chan(P, search.r_prime, cfg);
    res.solution.exp_search_steps = search.i;
    res.solution.beta_used = beta_lower_bound(search.r_prime, search.r0, 1e-9);
    res.solution.seed = cfg.seed;
    res.solution.algorithm_used = cfg.algorithm;
    return res;
}

} // namespace twocenter
