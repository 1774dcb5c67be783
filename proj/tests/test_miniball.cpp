#include <catch2/catch_amalgamated.hpp>

#include <twocenter/miniball.hpp>

#include "oracles.hpp"

using namespace twocenter;

namespace {

std::vector<Point3> regular_tetrahedron_edge1() {
    double s = 1.0 / (2.0 * std::sqrt(2.0));
    return {
        Point3{1, 1, 1} * s, Point3{1, -1, -1} * s,
        Point3{-1, 1, -1} * s, Point3{-1, -1, 1} * s,
    };
}

} // namespace

TEST_CASE("smallest_enclosing_ball trivial cases") {
    CHECK_THROWS_AS(smallest_enclosing_ball({}), EmptyInput);

    auto single = smallest_enclosing_ball({{0, 0, 0}});
    CHECK(single.radius == 0.0);
    CHECK(dist(single.center, {0, 0, 0}) == 0.0);

    auto pair = smallest_enclosing_ball({{0, 0, 0}, {2, 0, 0}});
    CHECK(pair.radius == Catch::Approx(1.0).margin(1e-12));
    CHECK(dist(pair.center, {1, 0, 0}) < 1e-12);
    CHECK(pair.support.size() == 2);
}

TEST_CASE("regular tetrahedron circumradius") {
    auto seb = smallest_enclosing_ball(regular_tetrahedron_edge1());
    CHECK(seb.radius == Catch::Approx(std::sqrt(3.0 / 8.0)).margin(1e-12));
}

TEST_CASE("welzl matches the exhaustive subset oracle") {
    Rng rng(424242);
    for (int t = 0; t < 100; ++t) {
        int n = rng.uniform_int(1, 12);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 3.0));
        auto seb = smallest_enclosing_ball(pts, derive_seed(1, t));
        double want = oracles::seb_radius_exhaustive(pts);
        CHECK(seb.radius == Catch::Approx(want).margin(1e-9));
        for (auto& p : pts) CHECK(dist(p, seb.center) <= seb.radius + 1e-9);
    }
}

TEST_CASE("support sets are minimal") {
    Rng rng(7);
    for (int t = 0; t < 60; ++t) {
        int n = rng.uniform_int(2, 10);
        std::vector<Point3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 2.0));
        auto seb = smallest_enclosing_ball(pts, derive_seed(2, t));
        REQUIRE(!seb.support.empty());
        REQUIRE(seb.support.size() <= 4);
        std::vector<Point3> sup;
        for (int i : seb.support) sup.push_back(pts[i]);
        CHECK(seb_of_upto4(sup).radius == Catch::Approx(seb.radius).margin(1e-7));
        if (sup.size() > 1) {
            for (std::size_t drop = 0; drop < sup.size(); ++drop) {
                std::vector<Point3> rest;
                for (std::size_t i = 0; i < sup.size(); ++i)
                    if (i != drop) rest.push_back(sup[i]);
                CHECK(seb_of_upto4(rest).radius < seb.radius - 1e-9);
            }
        }
    }
}

TEST_CASE("radius is monotone under insertion") {
    Rng rng(13);
    for (int t = 0; t < 1000; ++t) {
        int n = rng.uniform_int(2, 9);
        std::vector<Point3> pts;
        double prev = -1.0;
        for (int i = 0; i < n; ++i) {
            pts.push_back(rng.in_ball({0, 0, 0}, 4.0));
            double r = smallest_enclosing_ball(pts, derive_seed(3, t * 100 + i)).radius;
            CHECK(r >= prev - 1e-9);
            prev = r;
        }
    }
}

TEST_CASE("balls_intersection_status classification") {
    auto deg = balls_intersection_status({{0, 0, 0}, {2, 0, 0}}, 1.0);
    CHECK(deg.status == IntersectionStatus::Degenerate);
    CHECK(dist(deg.witness, {1, 0, 0}) < 1e-9);

    auto empty = balls_intersection_status({{0, 0, 0}, {2.1, 0, 0}}, 1.0);
    CHECK(empty.status == IntersectionStatus::Empty);

    auto full = balls_intersection_status({{0, 0, 0}, {1, 0, 0}}, 1.0);
    CHECK(full.status == IntersectionStatus::FullDim);

    CHECK(balls_intersection_status({}, 1.0).status == IntersectionStatus::Unconstrained);
}

TEST_CASE("intersection status agrees with direct feasibility") {
    Rng rng(2024);
    for (int t = 0; t < 500; ++t) {
        int k = rng.uniform_int(1, 8);
        std::vector<Point3> centers;
        for (int i = 0; i < k; ++i) centers.push_back(rng.in_ball({0, 0, 0}, 1.5));
        double r = rng.uniform(0.2, 2.0);
        auto st = balls_intersection_status(centers, r);
        auto seb = smallest_enclosing_ball(centers, 0x5eb5eb);
        if (st.status == IntersectionStatus::Empty) {
            CHECK(seb.radius > r - 1e-8);
        } else {
            double worst = 0.0;
            for (auto& c : centers) worst = std::max(worst, dist(st.witness, c));
            CHECK(worst <= r + 1e-8);
            if (st.status == IntersectionStatus::FullDim) CHECK(seb.radius < r + 1e-8);
        }
    }
}

TEST_CASE("candidate_radii contents") {
    auto pair = candidate_radii({{0, 0, 0}, {2, 0, 0}});
    REQUIRE(pair.size() == 2);
    CHECK(pair[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(pair[1] == Catch::Approx(1.0).margin(1e-12));

    std::vector<Point3> pairs = {{0, 0, 0}, {1, 0, 0}, {100, 0, 0}, {101, 0, 0}};
    auto radii = candidate_radii(pairs);
    bool has_half = false, has_large = false;
    for (double r : radii) {
        if (std::abs(r - 0.5) < 1e-9) has_half = true;
        if (r > 49.0) has_large = true;
    }
    CHECK(has_half);
    CHECK(has_large);
}

TEST_CASE("two-center optimum is always a candidate radius") {
    Rng rng(606);
    for (int t = 0; t < 25; ++t) {
        std::vector<Point3> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(rng.in_ball({0, 0, 0}, 2.0));
        auto best = oracles::two_center_exhaustive(pts);
        auto radii = candidate_radii(pts);
        bool found = false;
        for (double r : radii)
            if (std::abs(r - best.radius) <= 1e-9 * (1 + best.radius)) found = true;
        CHECK(found);
    }
}
