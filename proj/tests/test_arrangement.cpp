#include <catch2/catch_amalgamated.hpp>

#include <twocenter/arrangement.hpp>

using namespace twocenter;

namespace {

std::vector<Plane> random_planes(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Plane> out;
    for (int i = 0; i < n; ++i)
        out.emplace_back(Direction(rng.unit_vector()), rng.uniform(-2.0, 2.0));
    return out;
}

} // namespace

TEST_CASE("cell counts match the generic formula") {
    CHECK(enumerate_cells(random_planes(1, 10)).size() == 2);
    CHECK(enumerate_cells(random_planes(3, 11)).size() == 8);
    CHECK(enumerate_cells(random_planes(4, 12)).size() == 15);
    CHECK(enumerate_cells(random_planes(8, 13)).size() == 93);
    for (int n = 5; n <= 12; ++n)
        CHECK(enumerate_cells(random_planes(n, 100 + n)).size() == generic_cell_count(n));
}

TEST_CASE("representatives realize their sign vectors") {
    auto planes = random_planes(8, 21);
    auto cells = enumerate_cells(planes);
    for (auto& c : cells) {
        REQUIRE(c.signs.size() == planes.size());
        for (std::size_t l = 0; l < planes.size(); ++l) {
            double v = planes[l].signed_dist(c.representative);
            CHECK(v * c.signs[l] > 0.0);
        }
    }
}

TEST_CASE("dense sampling finds no unlisted cell") {
    auto planes = random_planes(8, 33);
    auto cells = enumerate_cells(planes);
    std::map<std::vector<std::int8_t>, int> index;
    for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i].signs] = 1;
    Rng rng(34);
    for (int t = 0; t < 20000; ++t) {
        Point3 p = rng.in_ball({0, 0, 0}, 6.0);
        std::vector<std::int8_t> sig(planes.size());
        bool on_plane = false;
        for (std::size_t l = 0; l < planes.size(); ++l) {
            double v = planes[l].signed_dist(p);
            if (std::abs(v) < 1e-12) { on_plane = true; break; }
            sig[l] = v > 0 ? 1 : -1;
        }
        if (on_plane) continue;
        REQUIRE(index.count(sig) == 1);
    }
}

TEST_CASE("tours toggle one plane per step and cover every cell") {
    auto one = enumerate_cells(random_planes(1, 40));
    auto tour1 = build_tour(one);
    REQUIRE(tour1.steps.size() == 2);
    CHECK(tour1.steps[0].toggled == CellTour::kStart);
    CHECK(tour1.steps[1].toggled == 0);

    auto four = enumerate_cells(random_planes(2, 41));
    REQUIRE(four.size() == 4);
    CHECK(build_tour(four).steps.size() <= 7);

    auto planes = random_planes(6, 42);
    auto cells = enumerate_cells(planes);
    REQUIRE(cells.size() == 42);
    auto tour = build_tour(cells);
    CHECK(tour.steps.size() <= 2 * cells.size());
    std::vector<bool> seen(cells.size(), false);
    std::vector<std::int8_t> cur = cells[tour.steps[0].cell].signs;
    seen[tour.steps[0].cell] = true;
    for (std::size_t i = 1; i < tour.steps.size(); ++i) {
        auto& st = tour.steps[i];
        REQUIRE(st.toggled >= 0);
        cur[st.toggled] = static_cast<std::int8_t>(-cur[st.toggled]);
        REQUIRE(cur == cells[st.cell].signs);
        seen[st.cell] = true;
    }
    for (bool s : seen) CHECK(s);
}

TEST_CASE("classify_planes tripartition") {
    Simplex low;
    low.vertices = {{0, 0, -3}, {1, 0, -2}, {0, 1, -2}, {0.3, 0.3, -1}};
    std::vector<Plane> planes = {Plane::from_raw({0, 0, 1}, 0)};
    auto cls = classify_planes(low, planes);
    CHECK(cls.above == std::vector<int>{0}); // plane passes above the simplex
    CHECK(cls.below.empty());
    CHECK(cls.crossing.empty());

    Simplex through;
    through.vertices = {{0, 0, -1}, {1, 0, 1}, {0, 1, 1}, {0.3, 0.3, 2}};
    CHECK(classify_planes(through, planes).crossing == std::vector<int>{0});

    // Random tripartition consistency against interior sampling.
    Rng rng(55);
    for (int t = 0; t < 30; ++t) {
        Simplex s;
        for (int i = 0; i < 4; ++i) s.vertices.push_back(rng.in_ball({0, 0, 0}, 2.0));
        auto ps = random_planes(10, 300 + t);
        auto c = classify_planes(s, ps);
        CHECK(c.above.size() + c.below.size() + c.crossing.size() == ps.size());
        for (int rep = 0; rep < 200; ++rep) {
            double w[4] = {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)};
            double sum = w[0] + w[1] + w[2] + w[3];
            Point3 p{0, 0, 0};
            for (int i = 0; i < 4; ++i) p += s.vertices[i] * (w[i] / sum);
            for (int idx : c.above) CHECK(ps[idx].signed_dist(p) < 1e-9);
            for (int idx : c.below) CHECK(ps[idx].signed_dist(p) > -1e-9);
        }
    }
}

TEST_CASE("cutting with rho=1 is the whole space") {
    auto planes = random_planes(20, 60);
    auto cut = build_cutting(planes, 1);
    REQUIRE(cut.simplices.size() == 1);
    CHECK(cut.simplices[0].whole_space);
    CHECK(cut.crossing[0].size() == planes.size());
}

TEST_CASE("cutting crossing bound holds for n=100, rho=4") {
    auto planes = random_planes(100, 61);
    auto cut = build_cutting(planes, 4, 777);
    REQUIRE(!cut.simplices.empty());
    for (auto& cr : cut.crossing) CHECK(cr.size() <= 25);
}

TEST_CASE("cutting simplices cover space") {
    auto planes = random_planes(40, 62);
    auto cut = build_cutting(planes, 3, 778);
    Rng rng(63);
    for (int t = 0; t < 2000; ++t) {
        Point3 p = rng.in_ball({0, 0, 0}, rng.uniform(0.1, 20.0));
        int hits = 0;
        for (auto& s : cut.simplices)
            if (s.contains(p, 1e-7)) ++hits;
        REQUIRE(hits >= 1);
        // Openly disjoint: strict-interior double hits must be rare/near-boundary.
        int strict = 0;
        for (auto& s : cut.simplices)
            if (s.contains(p, -1e-7)) ++strict;
        CHECK(strict <= 1);
    }
}
