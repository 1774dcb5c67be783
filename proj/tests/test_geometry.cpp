#include <catch2/catch_amalgamated.hpp>

#include <twocenter/geometry.hpp>

using namespace twocenter;

TEST_CASE("dualize_point basic images") {
    Plane origin = dualize_point({0, 0, 0});
    CHECK(std::abs(origin.signed_dist({1.0, 2.0, 0.0})) < 1e-12); // w = 0 plane
    CHECK(std::abs(origin.normal.z()) == Catch::Approx(1.0));

    Plane px = dualize_point({1, 0, 0}); // w = u
    CHECK(std::abs(px.signed_dist({2.0, 5.0, 2.0})) < 1e-12);
    CHECK(std::abs(px.signed_dist({-3.0, 1.0, -3.0})) < 1e-12);
}

TEST_CASE("dualize_plane coefficient read-off") {
    Point3 p0 = dualize_plane(dualize_point({0, 0, 0}));
    CHECK(dist(p0, {0, 0, 0}) < 1e-12);

    // w = 2u + 3v - 5  ->  (2, 3, 5)
    Plane h = Plane::from_raw({-2, -3, 1}, -5);
    Point3 q = dualize_plane(h);
    CHECK(dist(q, {2, 3, 5}) < 1e-12);

    Plane vertical = Plane::from_raw({1, 0, 0}, 1);
    CHECK_THROWS_AS(dualize_plane(vertical), VerticalPlane);
}

TEST_CASE("duality round trip on random points") {
    Rng rng(20260810);
    for (int i = 0; i < 1000; ++i) {
        Point3 p{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        Point3 back = dualize_plane(dualize_point(p));
        CHECK(dist(back, p) < 1e-9 * (1 + norm(p)));
    }
}

TEST_CASE("duality preserves above/below relations") {
    Rng rng(77);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        Point3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3), c = rng.uniform(-3, 3);
        Plane h = Plane::from_raw({-a, -b, 1}, c); // w = a u + b v - c
        int primal = side_above_plane(p, h);
        if (primal == 0) continue; // skip near-incident pairs
        Point3 hstar = dualize_plane(h);
        Plane pstar = dualize_point(p);
        int dual = side_above_plane(hstar, pstar);
        CHECK(primal == dual);
        ++checked;
    }
    CHECK(checked > 9000);
}

TEST_CASE("side_of_plane signs and symmetry") {
    Plane z0 = Plane::from_raw({0, 0, 1}, 0);
    CHECK(side_of_plane({0, 0, 1}, z0) == 1);
    CHECK(side_of_plane({0, 0, 0}, z0) == 0);
    CHECK(side_of_plane({0, 0, -2}, z0) == -1);

    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        Point3 p{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
        Plane h(Direction(rng.unit_vector()), rng.uniform(-2, 2));
        Plane hneg(Direction(-h.normal.v), -h.offset);
        CHECK(side_of_plane(p, h) == -side_of_plane(p, hneg));
    }
}

TEST_CASE("sphere_sphere_intersect lens, tangency, disjoint") {
    Ball a({0, 0, 0}, 1.0), b({1, 0, 0}, 1.0);
    auto lens = sphere_sphere_intersect(a, b);
    REQUIRE(lens.kind == SphereIntersection::Kind::Circle);
    CHECK(dist(lens.circle.center, {0.5, 0, 0}) < 1e-12);
    CHECK(lens.circle.radius == Catch::Approx(std::sqrt(3.0) / 2.0));
    CHECK(std::abs(dot(lens.circle.normal.v, Vec3{1, 0, 0})) == Catch::Approx(1.0));

    auto tang = sphere_sphere_intersect(a, Ball({2, 0, 0}, 1.0));
    REQUIRE(tang.kind == SphereIntersection::Kind::Tangent);
    CHECK(dist(tang.point, {1, 0, 0}) < 1e-12);

    auto far = sphere_sphere_intersect(a, Ball({3, 0, 0}, 1.0));
    CHECK(far.kind == SphereIntersection::Kind::Disjoint);

    CHECK_THROWS_AS(sphere_sphere_intersect(a, Ball({0, 0, 0}, 1.0)), ConcentricEqual);
    CHECK(sphere_sphere_intersect(a, Ball({0.1, 0, 0}, 3.0)).kind == SphereIntersection::Kind::Nested);
}

TEST_CASE("intersection circle lies on both spheres") {
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        Ball a(rng.in_ball({0, 0, 0}, 2.0), rng.uniform(0.5, 2.0));
        Ball b(rng.in_ball({0, 0, 0}, 2.0), rng.uniform(0.5, 2.0));
        SphereIntersection s;
        try {
            s = sphere_sphere_intersect(a, b);
        } catch (const ConcentricEqual&) {
            continue;
        }
        if (s.kind != SphereIntersection::Kind::Circle) continue;
        for (int k = 0; k < 16; ++k) {
            Point3 p = s.circle.point_at(k * kTwoPi / 16);
            CHECK(dist(p, a.center) == Catch::Approx(a.radius).margin(1e-9));
            CHECK(dist(p, b.center) == Catch::Approx(b.radius).margin(1e-9));
        }
    }
}

TEST_CASE("coverage_angle formula values") {
    CHECK(coverage_angle(2.0) == Catch::Approx(kPi / 3.0).margin(1e-12));
    CHECK(coverage_angle(0.4) == Catch::Approx(0.10119).margin(1e-5));
    CHECK_THROWS_AS(coverage_angle(0.0), InvalidBeta);
    CHECK_THROWS_AS(coverage_angle(2.5), InvalidBeta);
    CHECK_THROWS_AS(canonical_directions(-1.0), InvalidBeta);
}

TEST_CASE("canonical_directions covers the sphere at resolution alpha") {
    for (double beta : {2.0, 0.8, 0.4}) {
        double alpha = std::min(coverage_angle(beta), kPi / 4.0);
        auto dirs = canonical_directions(beta);
        CHECK(static_cast<double>(dirs.size()) <= kDirectionSetConstant / (alpha * alpha));
        Rng rng(31 + static_cast<int>(beta * 10));
        int samples = beta >= 0.8 ? 100000 : 20000;
        double cos_alpha = std::cos(alpha);
        for (int i = 0; i < samples; ++i) {
            Vec3 u = rng.unit_vector();
            double best = -1.0;
            for (auto& d : dirs) best = std::max(best, dot(u, d.v));
            REQUIRE(best >= cos_alpha - 1e-12);
        }
    }
}

TEST_CASE("arc frame is deterministic and arcs stay on their circle") {
    Circle3 c({1, 2, 3}, 2.0, Direction(Vec3{1, 1, 0}));
    Arc3 arc(c, 0.3, 2.5);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        Point3 p = arc.point_at_param(t);
        CHECK(dist(p, c.center) == Catch::Approx(c.radius));
        CHECK(std::abs(dot(p - c.center, c.normal.v)) < 1e-12);
    }
    CHECK(c.angle_of(arc.start()) == Catch::Approx(0.3));
}

TEST_CASE("frame rotation maps its axis to x") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        Direction v(rng.unit_vector());
        Frame3 f = Frame3::with_x_axis(v);
        Vec3 image = f.apply(v.v);
        CHECK(dist(image, {1, 0, 0}) < 1e-12);
        Vec3 p = rng.in_ball({0, 0, 0}, 5.0);
        CHECK(dist(f.apply_inverse(f.apply(p)), p) < 1e-9);
    }
}
