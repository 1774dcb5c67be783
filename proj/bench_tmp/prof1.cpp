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

    double r0 = smallest_enclosing_ball(pts).radius;
    SolverConfig cfg;
    SolverStats stats;
    cfg.stats = &stats;
    double rstar = optimize_reference(pts).radius;
    std::cout << "r0=" << r0 << " rstar=" << rstar << std::endl;
    for (double f : {0.9, 1.12}) {
        double r = rstar * f;
        double beta = std::min(beta_lower_bound(std::min(r, r0), r0, 1e-9), 2.0);
        stats = {};
        auto t0 = std::chrono::steady_clock::now();
        auto out = decide_improved(pts, r, beta, cfg);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << "decide_improved f=" << f << " beta=" << beta
                  << " guesses=" << stats.guesses << " mverts=" << stats.m_vertices
                  << " -> " << (int)out.variant << " in "
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1-t0).count() << "ms" << std::endl;
    }
    {
        auto t0 = std::chrono::steady_clock::now();
        SolverConfig c2; c2.algorithm = Algorithm::Cubic;
        auto sol = optimize_chan(pts, rstar * 1.3, c2);
        auto t1 = std::chrono::steady_clock::now();
        std::cout << "chan cubic r=" << sol.radius << " in "
                  << std::chrono::duration_cast<std::chrono::milliseconds>(t1-t0).count() << "ms" << std::endl;
    }
    return 0;
}
