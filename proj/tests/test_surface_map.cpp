#include <catch2/catch_amalgamated.hpp>

#include <twocenter/surface_map.hpp>

using namespace twocenter;

namespace {

Plane yz_plane(double x) { return Plane(Direction(Vec3{1, 0, 0}), x); }

} // namespace

TEST_CASE("sigma of a single point is a clipped right cap") {
    Point3 q{0, 0, 0};
    double r = 1.0, lam = 0.6;
    auto sig = build_sigma({q}, r, yz_plane(lam));
    REQUIRE(sig);
    REQUIRE(sig->faces.size() == 1);
    CHECK(!sig->degenerate);

    Rng rng(111);
    int on = 0;
    for (int t = 0; t < 20000; ++t) {
        Vec3 u = rng.unit_vector();
        Point3 x = q + u * r;
        bool expect = u.x >= 1e-6 && x.x <= lam - 1e-6;
        bool got = sig->contains(x);
        if (expect) REQUIRE(got);
        if (u.x < -1e-6 || x.x > lam + 1e-6) REQUIRE(!got);
        on += got;
    }
    CHECK(on > 1000);
}

TEST_CASE("sigma is empty when K(P_L) is empty or fully clipped") {
    CHECK(!build_sigma({{0, 0, 0}, {3, 0, 0}}, 1.0, yz_plane(5.0)).has_value());
    // clip plane left of the whole right part
    auto sig = build_sigma({{0, 0, 0}}, 1.0, yz_plane(-0.5));
    CHECK(!sig.has_value());
    // tangent pair: degenerate K
    auto deg = build_sigma({{0, 0, 0}, {2, 0, 0}}, 1.0, yz_plane(1.5));
    REQUIRE(deg);
    CHECK(deg->degenerate);
    CHECK(dist(deg->degenerate_point, {1, 0, 0}) < 1e-7);
}

TEST_CASE("sigma samples satisfy every constraint") {
    Rng rng(222);
    for (int t = 0; t < 25; ++t) {
        int n = rng.uniform_int(1, 8);
        std::vector<Point3> pl;
        for (int i = 0; i < n; ++i) pl.push_back(rng.in_ball({0, 0, 0}, 0.6));
        double r = 1.0;
        double lam = rng.uniform(-0.2, 1.2);
        auto sig = build_sigma(pl, r, yz_plane(lam));
        if (!sig || sig->degenerate) continue;
        for (auto& sa : sig->arcs) {
            for (double u : {0.1, 0.5, 0.9}) {
                Point3 x = sa.arc.point_at_param(u);
                for (auto& p : pl) CHECK(dist(x, p) <= r + 1e-7);
                CHECK(x.x <= lam + 1e-7);
                const Point3& q = sig->centers[sig->faces[sa.face].point];
                CHECK(dist(x, q) == Catch::Approx(r).margin(1e-9));
            }
        }
    }
}

TEST_CASE("gamma tangency, emptiness and residuals") {
    Point3 q{0, 0, 0};
    double r = 1.0;
    auto sig = build_sigma({q}, r, yz_plane(0.9));
    REQUIRE(sig);

    // tangent sphere: single point contact on sigma
    GammaCurve tangent = gamma_curve({2.0 * r * std::cos(0.5), 2.0 * r * std::sin(0.5), 0}, *sig, 7);
    REQUIRE(tangent.pieces.size() == 1);
    CHECK(tangent.pieces[0].point_contact);

    // too far: empty curve
    CHECK(gamma_curve({3, 0, 0}, *sig, 8).pieces.empty());

    Rng rng(333);
    for (int t = 0; t < 50; ++t) {
        Point3 p = rng.in_ball({1.2, 0, 0}, 0.8);
        auto g = gamma_curve(p, *sig, t);
        for (auto& piece : g.pieces) {
            if (piece.point_contact) continue;
            for (double u : {0.0, 0.3, 0.8, 1.0}) {
                Point3 x = piece.arc.point_at_param(u);
                CHECK(dist(x, p) == Catch::Approx(r).margin(1e-7));
                CHECK(sig->contains(x));
            }
        }
    }
}

TEST_CASE("short arc census: vacuous symmetric case and random audit") {
    // |aq| = |bq| = 2r with q on the bisector plane: C_ab misses the sphere
    // around q entirely.
    double r = 1.0;
    Point3 a{2, 0.5, 0}, b{2, -0.5, 0};
    double xq = 2.0 - std::sqrt(4.0 - 0.25);
    auto census = short_arc_census(a, b, {xq, 0, 0}, r, 1.0);
    CHECK((census.omega_full || census.omega_empty));
    CHECK(!census.lemma_violated);

    CHECK_THROWS_AS(short_arc_census({0, 0, 0}, {5, 0, 0}, {1, 0, 0}, 1.0, 0.5), NoIntersection);

    Rng rng(444);
    int applicable = 0;
    for (int t = 0; t < 10000; ++t) {
        double lam = rng.uniform(-0.3, 0.3);
        double rr = rng.uniform(0.8, 1.2);
        Point3 pa{lam + rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        Point3 pb{lam + rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        Point3 pq{lam - rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        ArcCensus c;
        try {
            c = short_arc_census(pa, pb, pq, rr, lam);
        } catch (const NoIntersection&) {
            continue;
        }
        if (c.lemma_applicable) ++applicable;
        REQUIRE(!c.lemma_violated);
    }
    CHECK(applicable > 100);
}

TEST_CASE("map of sigma with no curves has one cell per face") {
    auto sig = build_sigma({{0, 0, 0}, {0.4, 0.1, 0}}, 1.0, yz_plane(0.8));
    REQUIRE(sig);
    REQUIRE(!sig->degenerate);
    auto m = build_map(*sig, {});
    CHECK(m.cell_count == static_cast<int>(sig->faces.size()));
    CHECK(m.max_pair_intersections == 0);
}

TEST_CASE("one closed curve splits a cap into two cells") {
    auto sig = build_sigma({{0, 0, 0}}, 1.0, yz_plane(0.9));
    REQUIRE(sig);
    // gamma circle at x = 0.35, strictly inside the cap region
    GammaCurve g = gamma_curve({0.7, 0, 0}, *sig, 0);
    REQUIRE(!g.pieces.empty());
    auto m = build_map(*sig, {g});
    CHECK(m.cell_count == 2);
    // the two cells differ exactly by coverage of the curve's source
    std::vector<std::vector<int>> sigs;
    for (auto& node : m.nodes)
        if (node.kind == MapMNode::Kind::Cell) sigs.push_back(node.uncovered);
    REQUIRE(sigs.size() == 2);
    CHECK(sigs[0] != sigs[1]);
}

TEST_CASE("map nodes carry consistent uncovered sets") {
    Rng rng(555);
    for (int t = 0; t < 15; ++t) {
        int n = rng.uniform_int(2, 6);
        std::vector<Point3> pl;
        for (int i = 0; i < n; ++i) pl.push_back(rng.in_ball({-0.3, 0, 0}, 0.45));
        auto sig = build_sigma(pl, 1.0, yz_plane(rng.uniform(0.2, 0.8)));
        if (!sig || sig->degenerate) continue;
        std::vector<GammaCurve> curves;
        int nr = rng.uniform_int(1, 6);
        for (int i = 0; i < nr; ++i)
            curves.push_back(gamma_curve(rng.in_ball({1.4, 0, 0}, 0.9), *sig, i));
        MapM m;
        try {
            m = build_map(*sig, curves);
        } catch (const IntersectionBoundViolated&) {
            FAIL("pair intersection bound fired on a valid configuration");
        }
        CHECK(m.max_pair_intersections <= 3);
        for (auto& node : m.nodes) {
            // recompute the uncovered set directly from the representative
            std::vector<int> want;
            for (auto& c : curves)
                if (dist(node.representative, c.source_point) > 1.0 + 1e3 * 1e-9)
                    want.push_back(c.source);
            CHECK(node.uncovered == want);
            if (node.kind == MapMNode::Kind::Cell) CHECK(sig->contains(node.representative));
        }
    }
}

TEST_CASE("grand tour visits every node with single toggles") {
    auto sig = build_sigma({{0, 0, 0}, {0.5, 0, 0}}, 1.0, yz_plane(0.8));
    REQUIRE(sig);
    std::vector<GammaCurve> curves;
    curves.push_back(gamma_curve({1.2, 0.4, 0.1}, *sig, 0));
    curves.push_back(gamma_curve({1.1, -0.5, 0.2}, *sig, 1));
    auto m = build_map(*sig, curves);
    auto uncovered = [&](const Point3& x) {
        std::vector<int> u;
        for (auto& c : curves)
            if (dist(x, c.source_point) > 1.0 + 1e-6) u.push_back(c.source);
        return u;
    };
    auto tour = grand_tour(m, &*sig, {}, uncovered);
    REQUIRE(!tour.steps.empty());
    std::vector<bool> seen(m.nodes.size(), false);
    for (auto& st : tour.steps)
        if (st.node < static_cast<int>(m.nodes.size())) seen[st.node] = true;
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i]);
    // toggles match signature diffs along the walk
    for (std::size_t i = 1; i < tour.steps.size(); ++i) {
        if (tour.steps[i].restart) continue;
        auto& prev = tour.nodes[tour.steps[i - 1].node].uncovered;
        auto& cur = tour.nodes[tour.steps[i].node].uncovered;
        std::vector<int> sym;
        std::set_symmetric_difference(prev.begin(), prev.end(), cur.begin(), cur.end(),
                                      std::back_inserter(sym));
        CHECK(sym.size() <= 1);
        if (sym.size() == 1) CHECK(sym[0] == tour.steps[i].toggled);
        if (sym.empty()) CHECK(tour.steps[i].toggled == -1);
    }
}
