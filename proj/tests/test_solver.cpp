#include <catch2/catch_amalgamated.hpp>

#include <twocenter/solver.hpp>

#include "oracles.hpp"

using namespace twocenter;

namespace {

const std::vector<Point3> kFourPairs = {{0, 0, 0}, {2, 0, 0}, {10, 0, 0}, {12, 0, 0}};

std::vector<Point3> planted_instance(int n, double separation, double spread, std::uint64_t seed) {
    Rng rng(seed);
    Vec3 axis = rng.unit_vector();
    Point3 offset = rng.in_ball({0, 0, 0}, 2.0);
    Point3 cA = offset + axis * (separation / 2.0);
    Point3 cB = offset - axis * (separation / 2.0);
    std::vector<Point3> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back(rng.in_ball(i % 2 == 0 ? cA : cB, spread));
    return pts;
}

} // namespace

TEST_CASE("brute force decision three-way classification") {
    SolverConfig cfg;
    CHECK(brute_force_decide({{0, 0, 0}, {10, 0, 0}}, 0.1, cfg).variant ==
          DecisionVariant::StrictlyCoverable);
    CHECK(brute_force_decide(kFourPairs, 1.0, cfg).variant == DecisionVariant::ExactlyCritical);
    CHECK(brute_force_decide(kFourPairs, 0.99, cfg).variant == DecisionVariant::NotCoverable);
    CHECK(brute_force_decide(kFourPairs, 1.01, cfg).variant ==
          DecisionVariant::StrictlyCoverable);
}

TEST_CASE("plane-induced bipartitions match the exhaustive search") {
    Rng rng(9001);
    for (int t = 0; t < 20; ++t) {
        int n = rng.uniform_int(4, 11);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 2.0));
        auto planes = detail_sv::best_partition_planes(pts, 5);
        auto exact = detail_sv::best_partition_exhaustive(pts, 5);
        CHECK(planes.radius == Catch::Approx(exact.radius).margin(1e-9));
    }
}

TEST_CASE("decide_cubic matches brute force on small instances") {
    SolverConfig cfg;
    CHECK(decide_cubic({{0, 0, 0}, {10, 0, 0}}, 0.1, cfg).variant ==
          DecisionVariant::StrictlyCoverable);
    CHECK(decide_cubic(kFourPairs, 1.0, cfg).variant == DecisionVariant::ExactlyCritical);
    CHECK(decide_cubic(kFourPairs, 0.99, cfg).variant == DecisionVariant::NotCoverable);

    Rng rng(777);
    for (int t = 0; t < 40; ++t) {
        int n = rng.uniform_int(4, 10);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.5));
        auto ref = oracles::two_center_exhaustive(pts);
        for (double factor : {0.85, 1.0, 1.18}) {
            double r = ref.radius * factor;
            if (r <= 1e-6) continue;
            SolverConfig c;
            c.seed = derive_seed(1000, t);
            auto got = decide_cubic(pts, r, c);
            auto want = brute_force_decide(pts, r, c);
            INFO("n=" << n << " t=" << t << " factor=" << factor);
            CHECK(got.variant == want.variant);
            if (got.variant != DecisionVariant::NotCoverable) {
                REQUIRE(got.has_witness);
                for (int i : got.side1) CHECK(dist(pts[i], got.c1) <= r + 1e-6);
                for (int i : got.side2) CHECK(dist(pts[i], got.c2) <= r + 1e-6);
            }
        }
    }
}

TEST_CASE("decide_cubic is invariant under the tour seed") {
    Rng rng(12);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point3> pts;
        for (int i = 0; i < 8; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.0));
        auto ref = oracles::two_center_exhaustive(pts);
        for (double factor : {0.9, 1.1}) {
            SolverConfig a, b;
            a.seed = 1;
            b.seed = 99999;
            CHECK(decide_cubic(pts, ref.radius * factor, a).variant ==
                  decide_cubic(pts, ref.radius * factor, b).variant);
        }
    }
}

TEST_CASE("decide_cubic with the polytope leaf predicate") {
    SolverConfig cfg;
    cfg.predicate = LeafPredicate::Polytope;
    CHECK(decide_cubic(kFourPairs, 1.0, cfg).variant == DecisionVariant::ExactlyCritical);
    CHECK(decide_cubic(kFourPairs, 0.99, cfg).variant == DecisionVariant::NotCoverable);
    CHECK(decide_cubic(kFourPairs, 1.01, cfg).variant == DecisionVariant::StrictlyCoverable);

    Rng rng(13);
    for (int t = 0; t < 3; ++t) {
        std::vector<Point3> pts;
        for (int i = 0; i < 6; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.2));
        auto ref = oracles::two_center_exhaustive(pts);
        for (double factor : {0.9, 1.15}) {
            double r = ref.radius * factor;
            if (r <= 1e-6) continue;
            SolverConfig mini;
            auto want = brute_force_decide(pts, r, mini);
            auto got = decide_cubic(pts, r, cfg);
            CHECK(got.variant == want.variant);
        }
    }
}

TEST_CASE("beta lower bound values") {
    CHECK(beta_lower_bound(0.8, 1.0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(beta_lower_bound(2.0 / 3.0, 1.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(beta_lower_bound(1.0, 1.0, 0.01) == Catch::Approx(0.01));
    CHECK_THROWS_AS(beta_lower_bound(1.5, 1.0), InvalidRadius);
}

TEST_CASE("decide_improved on well separated clusters") {
    auto pts = planted_instance(10, 6.0, 0.8, 42);
    auto ref = oracles::two_center_exhaustive(pts);
    SolverConfig cfg;
    auto strict = decide_improved(pts, ref.radius * 1.1, 1.0, cfg);
    REQUIRE(strict.variant == DecisionVariant::StrictlyCoverable);
    for (int i : strict.side1) CHECK(dist(pts[i], strict.c1) <= ref.radius * 1.1 + 1e-6);
    for (int i : strict.side2) CHECK(dist(pts[i], strict.c2) <= ref.radius * 1.1 + 1e-6);

    CHECK(decide_improved(pts, ref.radius * 0.9, 1.0, cfg).variant ==
          DecisionVariant::NotCoverable);

    CHECK(decide_improved(kFourPairs, 1.0, 1.0, cfg).variant ==
          DecisionVariant::ExactlyCritical);
}

TEST_CASE("decide_improved oracle sweep on planted instances") {
    Rng rng(31337);
    for (int t = 0; t < 25; ++t) {
        int n = rng.uniform_int(6, 12);
        auto pts = planted_instance(n, rng.uniform(5.0, 8.0), rng.uniform(0.5, 1.0),
                                    derive_seed(55, t));
        auto r0 = smallest_enclosing_ball(pts).radius;
        auto ref = oracles::two_center_exhaustive(pts);
        for (double factor : {0.9, 1.0, 1.12}) {
            double r = ref.radius * factor;
            if (r <= 1e-9 || r >= r0) continue;
            double beta = beta_lower_bound(r, r0, 1e-9);
            if (beta < 0.05) continue;
            SolverConfig cfg;
            cfg.seed = derive_seed(56, t);
            auto got = decide_improved(pts, r, std::min(beta, 2.0), cfg);
            auto want = brute_force_decide(pts, r, cfg);
            INFO("t=" << t << " n=" << n << " factor=" << factor << " beta=" << beta);
            CHECK(got.variant == want.variant);
        }
    }
}

TEST_CASE("exponential search bracketing") {
    // planted exact ratios via two collinear pairs
    for (double ratio : {0.3, 0.7, 0.9, 0.97}) {
        double w = 1.0;
        double a = w * (1.0 - ratio) / ratio;
        std::vector<Point3> pts = {{-a - w, 0, 0}, {-a + w, 0, 0}, {a - w, 0, 0}, {a + w, 0, 0}};
        double r0 = smallest_enclosing_ball(pts).radius;
        double rstar = oracles::two_center_exhaustive(pts).radius;
        CHECK(rstar / r0 == Catch::Approx(ratio).margin(1e-12));
        SolverConfig cfg;
        cfg.algorithm = Algorithm::Cubic;
        auto res = exponential_search(pts, cfg);
        double gap = 1.0 - rstar / r0;
        CHECK(std::pow(0.5, res.i) < gap + 1e-12);
        CHECK(gap <= std::pow(0.5, res.i - 1) + 1e-12);
        CHECK(res.r_prime >= rstar - 1e-12);
    }
    // r* = 0 stops at i = 1
    SolverConfig cfg;
    cfg.algorithm = Algorithm::Cubic;
    auto res = exponential_search({{0, 0, 0}, {2, 0, 0}}, cfg);
    CHECK(res.i == 1);
}

TEST_CASE("optimize_chan matches the reference") {
    SolverConfig cfg;
    cfg.algorithm = Algorithm::Cubic;
    auto trivial = optimize_chan({{0, 0, 0}, {10, 0, 0}}, 2.0, cfg);
    CHECK(trivial.radius == Catch::Approx(0.0).margin(1e-12));

    auto four = optimize_chan(kFourPairs, 4.9, cfg);
    CHECK(four.radius == Catch::Approx(1.0).margin(1e-12));

    Rng rng(515);
    for (int t = 0; t < 12; ++t) {
        int n = rng.uniform_int(4, 11);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.5));
        auto ref = oracles::two_center_exhaustive(pts);
        SolverConfig c;
        c.algorithm = Algorithm::Cubic;
        c.seed = derive_seed(77, t);
        auto sol = optimize_chan(pts, ref.radius * 1.3 + 0.1, c);
        INFO("t=" << t << " n=" << n);
        CHECK(sol.radius == Catch::Approx(ref.radius).margin(1e-9 * (1 + ref.radius)));
        for (int i : sol.side1) CHECK(dist(pts[i], sol.c1) <= sol.radius + 1e-7);
        for (int i : sol.side2) CHECK(dist(pts[i], sol.c2) <= sol.radius + 1e-7);
    }
}

TEST_CASE("optimize_reference basics") {
    auto single = optimize_reference({{1, 2, 3}});
    CHECK(single.radius == 0.0);

    // regular tetrahedron edge 1: best split is two opposite edges
    double s = 1.0 / (2.0 * std::sqrt(2.0));
    std::vector<Point3> tetra = {Point3{1, 1, 1} * s, Point3{1, -1, -1} * s,
                                 Point3{-1, 1, -1} * s, Point3{-1, -1, 1} * s};
    auto sol = optimize_reference(tetra);
    CHECK(sol.radius == Catch::Approx(0.5).margin(1e-12));

    Rng rng(616);
    for (int t = 0; t < 10; ++t) {
        int n = rng.uniform_int(3, 12);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 2.0));
        auto ref = oracles::two_center_exhaustive(pts);
        CHECK(optimize_reference(pts).radius == Catch::Approx(ref.radius).margin(1e-9));
    }
}

TEST_CASE("solve: exact, approximate and epsilon-zero paths") {
    // eps = 0.1, r* = 0.7 r0: exponential search succeeds at 0.75 r0
    {
        double ratio = 0.7, w = 1.0;
        double a = w * (1.0 - ratio) / ratio;
        std::vector<Point3> pts = {{-a - w, 0, 0}, {-a + w, 0, 0}, {a - w, 0, 0}, {a + w, 0, 0}};
        SolverConfig cfg;
        cfg.algorithm = Algorithm::Cubic;
        cfg.epsilon = 0.1;
        auto res = solve(pts, cfg);
        CHECK(!res.approximate);
        CHECK(res.solution.radius == Catch::Approx(w).margin(1e-9));
    }
    // eps = 0.3, r* = 0.95 r0: the search hits the epsilon rule first
    {
        double ratio = 0.95, w = 1.0;
        double a = w * (1.0 - ratio) / ratio;
        std::vector<Point3> pts = {{-a - w, 0, 0}, {-a + w, 0, 0}, {a - w, 0, 0}, {a + w, 0, 0}};
        SolverConfig cfg;
        cfg.algorithm = Algorithm::Cubic;
        cfg.epsilon = 0.3;
        auto res = solve(pts, cfg);
        CHECK(res.approximate);
        CHECK(res.solution.approximate);
        CHECK(res.solution.radius ==
              Catch::Approx(smallest_enclosing_ball(pts).radius).margin(1e-9));
    }
    // eps = 0 with the cubic path is always exact
    Rng rng(717);
    for (int t = 0; t < 8; ++t) {
        int n = rng.uniform_int(3, 10);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.2));
        SolverConfig cfg;
        cfg.algorithm = Algorithm::Cubic;
        cfg.seed = derive_seed(88, t);
        auto res = solve(pts, cfg);
        auto ref = oracles::two_center_exhaustive(pts);
        CHECK(!res.approximate);
        CHECK(res.solution.radius == Catch::Approx(ref.radius).margin(1e-9 * (1 + ref.radius)));
    }
}

TEST_CASE("solve with the improved path on planted instances") {
    Rng rng(818);
    for (int t = 0; t < 4; ++t) {
        int n = rng.uniform_int(6, 12);
        auto pts = planted_instance(n, rng.uniform(5.0, 8.0), rng.uniform(0.4, 0.9),
                                    derive_seed(99, t));
        SolverConfig cfg;
        cfg.algorithm = Algorithm::Improved;
        cfg.seed = derive_seed(100, t);
        auto res = solve(pts, cfg);
        auto ref = oracles::two_center_exhaustive(pts);
        INFO("t=" << t << " n=" << n);
        CHECK(res.solution.radius == Catch::Approx(ref.radius).margin(1e-9 * (1 + ref.radius)));
    }
}

TEST_CASE("decision monotonicity in r") {
    Rng rng(919);
    for (int t = 0; t < 6; ++t) {
        std::vector<Point3> pts;
        for (int i = 0; i < 8; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 1.0));
        auto ref = oracles::two_center_exhaustive(pts);
        SolverConfig cfg;
        bool was_coverable = false;
        for (double f : {0.5, 0.8, 0.95, 1.0, 1.05, 1.3, 2.0}) {
            double r = std::max(ref.radius * f, 1e-6);
            bool coverable =
                decide_cubic(pts, r, cfg).variant != DecisionVariant::NotCoverable;
            if (was_coverable) CHECK(coverable);
            was_coverable = coverable;
        }
    }
}
