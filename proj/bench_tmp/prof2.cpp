#include <twocenter/solver.hpp>
#include <chrono>
#include <iostream>
using namespace twocenter;

int main() {
    Rng g(derive_seed(55, 3));
    Vec3 axis = g.unit_vector();
    Point3 off = g.in_ball({0,0,0}, 2.0);
    std::vector<Point3> pts;
    double sep = 6.5, spread = 0.8;
    Point3 cA = off + axis * (sep/2), cB = off - axis * (sep/2);
    for (int i = 0; i < 12; ++i) pts.push_back(g.in_ball(i % 2 ? cA : cB, spread));
    double rstar = optimize_reference(pts).radius;

    {
        auto t0 = std::chrono::steady_clock::now();
        SolverConfig c; c.algorithm = Algorithm::Improved;
        SolverStats st; c.stats = &st;
        auto sol = optimize_chan(pts, rstar * 1.3, c);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << "chan improved r=" << sol.radius << " decisions=" << st.decisions << " in "
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1-t0).count() << "ms" << std::endl;
    }
    {
        auto t0 = std::chrono::steady_clock::now();
        SolverConfig c; c.algorithm = Algorithm::Improved;
        auto res = solve(pts, c);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << "solve improved r=" << res.solution.radius << " in "
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1-t0).count() << "ms" << std::endl;
    }
    return 0;
}
