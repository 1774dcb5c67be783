// Command-line front end: instance generation, decision, optimization,
// verification, benchmarking, and the lemma census.

#include <twocenter/instance_io.hpp>
#include <twocenter/solver.hpp>
#include <twocenter/surface_map.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace twocenter;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

Algorithm parse_algorithm(const std::string& s) {
    if (s == "cubic") return Algorithm::Cubic;
    if (s == "improved") return Algorithm::Improved;
    if (s == "bruteforce") return Algorithm::BruteForce;
    return Algorithm::Auto;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long micros() const {
        return std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

json config_to_json(const SolverConfig& cfg, const std::string& alg) {
    json j;
    j["algorithm"] = alg;
    j["predicate"] = cfg.predicate == LeafPredicate::Polytope ? "polytope" : "miniball";
    j["epsilon"] = cfg.epsilon;
    j["rho"] = cfg.rho;
    j["levels"] = cfg.levels;
    j["seed"] = cfg.seed;
    j["beta_floor"] = cfg.beta_floor;
    return j;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

int cmd_gen(const std::string& generator, int n, std::uint64_t seed, double separation,
            double spread, double rstar, double ratio, const std::string& format,
            const std::string& out_path) {
    Instance inst;
    if (generator == "uniform") inst = gen_uniform(n, seed);
    else if (generator == "clustered") inst = gen_clustered(n, seed, separation, spread);
    else if (generator == "planted") inst = gen_planted(n, seed, rstar, separation);
    else if (generator == "planted-ratio") inst = gen_planted_ratio(ratio, seed);
    else {
        std::cerr << "unknown generator: " << generator << "\n";
        return kExitUsage;
    }
    std::string payload =
        format == "json" ? instance_to_json(inst).dump(2) + "\n" : instance_to_csv(inst);
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitUsage;
        }
        out << payload;
    }
    return kExitOk;
}

int cmd_decide(const std::string& path, const std::string& format, double radius,
               const std::string& alg_name, double beta, std::uint64_t seed,
               const std::string& predicate, bool oracle_check) {
    Instance inst = parse_instance(path, format);
    SolverConfig cfg;
    cfg.algorithm = parse_algorithm(alg_name);
    cfg.seed = seed;
    if (predicate == "polytope") cfg.predicate = LeafPredicate::Polytope;
    SolverStats stats;
    cfg.stats = &stats;

    Timer timer;
    DecisionOutcome out;
    Algorithm alg = cfg.algorithm;
    if (alg == Algorithm::BruteForce) {
        out = brute_force_decide(inst.points, radius, cfg);
    } else if (alg == Algorithm::Improved) {
        double r0 = smallest_enclosing_ball(inst.points, derive_seed(seed, 31)).radius;
        double b = beta > 0.0 ? beta : beta_lower_bound(std::min(radius, r0), r0, 1e-9);
        if (b >= cfg.beta_floor) {
            stats.beta_used = std::min(b, 2.0);
            out = decide_improved(inst.points, radius, std::min(b, 2.0), cfg);
        } else {
            out = decide_cubic(inst.points, radius, cfg);
        }
    } else {
        out = decide_cubic(inst.points, radius, cfg);
    }

    json report;
    report["schema"] = "twocenter-report/1";
    report["command"] = "decide";
    report["instance"] = path;
    report["radius"] = radius;
    report["config"] = config_to_json(cfg, alg_name);
    report["outcome"] = variant_name(out.variant);
    if (out.has_witness) {
        TwoCenterSolution sol;
        sol.c1 = out.c1;
        sol.c2 = out.c2;
        sol.radius = radius;
        sol.side1 = out.side1;
        sol.side2 = out.side2;
        report["witness"] = solution_to_json(sol);
    }
    std::string oracle = "skipped";
    if (oracle_check) {
        auto want = brute_force_decide(inst.points, radius, cfg);
        oracle = want.variant == out.variant ? "pass" : "fail";
    }
    report["oracle_check"] = oracle;
    report["stats"] = stats_to_json(stats);
    report["wall_micros"] = timer.micros();
    emit(report);
    if (oracle == "fail") return kExitInternal;
    return out.variant == DecisionVariant::NotCoverable ? kExitNegative : kExitOk;
}

int cmd_solve(const std::string& path, const std::string& format, const std::string& alg_name,
              double epsilon, int rho, int levels, std::uint64_t seed, bool oracle_check,
              const std::string& solution_out) {
    Instance inst = parse_instance(path, format);
    SolverConfig cfg;
    cfg.algorithm = parse_algorithm(alg_name);
    cfg.epsilon = epsilon;
    cfg.rho = rho;
    cfg.levels = levels;
    cfg.seed = seed;
    SolverStats stats;
    cfg.stats = &stats;

    Timer timer;
    auto res = solve(inst.points, cfg);

    json report;
    report["schema"] = "twocenter-report/1";
    report["command"] = "solve";
    report["instance"] = path;
    report["config"] = config_to_json(cfg, alg_name);
    report["solution"] = solution_to_json(res.solution);
    report["approximate"] = res.approximate;
    std::string oracle = "skipped";
    if (oracle_check && !res.approximate) {
        auto ref = optimize_reference(inst.points, cfg);
        double rel = std::abs(res.solution.radius - ref.radius) / (1.0 + ref.radius);
        bool valid = verify_solution(inst.points, res.solution);
        oracle = (rel <= 1e-9 && valid) ? "pass" : "fail";
    }
    report["oracle_check"] = oracle;
    report["stats"] = stats_to_json(stats);
    report["wall_micros"] = timer.micros();
    emit(report);
    if (!solution_out.empty()) {
        std::ofstream out(solution_out);
        out << solution_to_json(res.solution).dump(2) << "\n";
    }
    return oracle == "fail" ? kExitInternal : kExitOk;
}

int cmd_verify(const std::string& path, const std::string& format,
               const std::string& solution_path, bool against_reference) {
    Instance inst = parse_instance(path, format);
    std::ifstream in(solution_path);
    if (!in) {
        std::cerr << "cannot open solution file: " << solution_path << "\n";
        return kExitUsage;
    }
    json sj;
    in >> sj;
    auto sol = solution_from_json(sj);
    bool ok = verify_solution(inst.points, sol);
    std::string ref_check = "skipped";
    if (against_reference && ok && !sol.approximate) {
        auto ref = optimize_reference(inst.points);
        ref_check = sol.radius <= ref.radius + 1e-9 * (1 + ref.radius) + 1e-9 ? "pass" : "fail";
    }
    json report;
    report["schema"] = "twocenter-report/1";
    report["command"] = "verify";
    report["instance"] = path;
    report["solution_file"] = solution_path;
    report["coverage"] = ok ? "pass" : "fail";
    report["reference_check"] = ref_check;
    emit(report);
    return (ok && ref_check != "fail") ? kExitOk : kExitNegative;
}

int cmd_bench(const std::string& sizes_csv, int seeds_per_size, const std::string& alg_name,
              const std::string& generator, double separation, double spread,
              std::uint64_t seed0, const std::string& mode) {
    std::vector<int> sizes;
    {
        std::istringstream ss(sizes_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
    }
    if (sizes.empty()) {
        std::cerr << "no sizes given\n";
        return kExitUsage;
    }
    std::cout << "n,seed,algorithm,cells,M_vertices,guesses,micros,outcome\n";
    for (int n : sizes) {
        for (int s = 0; s < seeds_per_size; ++s) {
            std::uint64_t seed = derive_seed(seed0, static_cast<std::uint64_t>(n) * 1000 + s);
            Instance inst;
            if (generator == "uniform") inst = gen_uniform(n, seed);
            else if (generator == "clustered") inst = gen_clustered(n, seed, separation, spread);
            else inst = gen_planted(n, seed, spread, separation);

            SolverConfig cfg;
            cfg.algorithm = parse_algorithm(alg_name);
            cfg.seed = seed;
            SolverStats stats;
            cfg.stats = &stats;
            Timer timer;
            std::string outcome;
            if (mode == "map") {
                // single improved decision near the planted radius: measures
                // the arrangement M rather than the whole optimization
                auto r0 = smallest_enclosing_ball(inst.points, derive_seed(seed, 31)).radius;
                double r = inst.has_planted ? inst.planted_rstar * 1.05 : r0 * 0.6;
                double beta = beta_lower_bound(std::min(r, r0), r0, 0.05);
                auto out = decide_improved(inst.points, r, std::min(beta, 2.0), cfg);
                outcome = variant_name(out.variant);
            } else {
                auto res = solve(inst.points, cfg);
                outcome = res.approximate ? "Approximate" : "Solved";
            }
            std::cout << n << "," << seed << "," << alg_name << "," << stats.cells_visited << ","
                      << stats.m_vertices << "," << stats.guesses << "," << timer.micros() << ","
                      << outcome << "\n";
        }
    }
    return kExitOk;
}

int cmd_census(int trials, std::uint64_t seed, int map_runs) {
    Rng rng(derive_seed(seed, 0xCE1505));
    long long applicable = 0, violations = 0, vacuous = 0, valid = 0;
    long long attempts = 0;
    while (valid < trials && attempts < 100LL * trials) {
        ++attempts;
        double lam = rng.uniform(-0.3, 0.3);
        double r = rng.uniform(0.8, 1.2);
        Point3 a{lam + rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        Point3 b{lam + rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        Point3 q{lam - rng.uniform(0.01, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
        ArcCensus census;
        try {
            census = short_arc_census(a, b, q, r, lam);
        } catch (const NoIntersection&) {
            continue;
        }
        ++valid;
        if (census.omega_empty || census.omega_full) ++vacuous;
        if (census.lemma_applicable) ++applicable;
        if (census.lemma_violated) ++violations;
    }

    // pairwise intersection bound audit over full improved decisions
    long long bound_violations = 0;
    for (int run = 0; run < map_runs; ++run) {
        auto inst = gen_planted(8 + run % 5, derive_seed(seed, 4000 + run), 1.0, 6.0);
        double r0 = smallest_enclosing_ball(inst.points).radius;
        double r = inst.planted_rstar * (0.9 + 0.05 * (run % 5));
        SolverConfig cfg;
        cfg.seed = derive_seed(seed, 5000 + run);
        double beta = beta_lower_bound(std::min(r, r0), r0, 0.05);
        try {
            decide_improved(inst.points, r, std::min(beta, 2.0), cfg);
        } catch (const IntersectionBoundViolated&) {
            ++bound_violations;
        }
    }

    json report;
    report["schema"] = "twocenter-report/1";
    report["command"] = "census";
    report["trials"] = trials;
    report["seed"] = seed;
    report["valid_configurations"] = valid;
    report["vacuous"] = vacuous;
    report["lemma_applicable"] = applicable;
    report["lemma_violations"] = violations;
    report["map_runs"] = map_runs;
    report["pair_bound_violations"] = bound_violations;
    emit(report);
    return (violations == 0 && bound_violations == 0) ? kExitOk : kExitInternal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Euclidean 2-center solver in three dimensions"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate an instance");
    std::string gen_kind = "uniform", gen_format = "csv", gen_out;
    int gen_n = 20;
    std::uint64_t gen_seed = 1;
    double gen_separation = 6.0, gen_spread = 1.0, gen_rstar = 1.0, gen_ratio = 0.7;
    gen->add_option("--generator", gen_kind, "uniform|clustered|planted|planted-ratio");
    gen->add_option("--n", gen_n, "number of points");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--separation", gen_separation, "cluster separation");
    gen->add_option("--spread", gen_spread, "cluster spread");
    gen->add_option("--rstar", gen_rstar, "planted optimal radius");
    gen->add_option("--ratio", gen_ratio, "planted r*/r0 ratio");
    gen->add_option("--format", gen_format, "csv|json");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    auto* decide = app.add_subcommand("decide", "run the decision procedure");
    std::string dec_path, dec_format = "auto", dec_alg = "auto", dec_pred = "miniball";
    double dec_radius = 0.0, dec_beta = 0.0;
    std::uint64_t dec_seed = 1;
    bool dec_oracle = false;
    decide->add_option("instance", dec_path, "instance file")->required();
    decide->add_option("--radius", dec_radius, "decision radius")->required();
    decide->add_option("--format", dec_format, "csv|json|auto");
    decide->add_option("--algorithm", dec_alg, "auto|cubic|improved|bruteforce");
    decide->add_option("--beta", dec_beta, "separation promise for the improved procedure");
    decide->add_option("--seed", dec_seed, "random seed");
    decide->add_option("--predicate", dec_pred, "miniball|polytope leaf predicate");
    decide->add_flag("--oracle-check", dec_oracle, "cross-check against brute force");

    auto* slv = app.add_subcommand("solve", "solve the optimization problem");
    std::string slv_path, slv_format = "auto", slv_alg = "auto", slv_solution_out;
    double slv_eps = 0.0;
    int slv_rho = 4, slv_levels = 1;
    std::uint64_t slv_seed = 1;
    bool slv_oracle = false;
    slv->add_option("instance", slv_path, "instance file")->required();
    slv->add_option("--format", slv_format, "csv|json|auto");
    slv->add_option("--algorithm", slv_alg, "auto|cubic|improved|bruteforce");
    slv->add_option("--epsilon", slv_eps, "approximation parameter");
    slv->add_option("--rho", slv_rho, "cutting parameter");
    slv->add_option("--levels", slv_levels, "Chan level compression (1..3)");
    slv->add_option("--seed", slv_seed, "random seed");
    slv->add_flag("--oracle-check", slv_oracle, "cross-check against the reference");
    slv->add_option("--solution-out", slv_solution_out, "write the solution JSON here");

    auto* ver = app.add_subcommand("verify", "re-check a solution file");
    std::string ver_path, ver_format = "auto", ver_solution;
    bool ver_ref = false;
    ver->add_option("instance", ver_path, "instance file")->required();
    ver->add_option("--solution", ver_solution, "solution JSON file")->required();
    ver->add_option("--format", ver_format, "csv|json|auto");
    ver->add_flag("--against-reference", ver_ref, "also compare with the reference optimum");

    auto* bench = app.add_subcommand("bench", "emit a CSV scaling table");
    std::string bench_sizes = "20,40,80", bench_alg = "improved", bench_gen = "planted",
                bench_mode = "map";
    int bench_seeds = 3;
    double bench_separation = 8.0, bench_spread = 1.0;
    std::uint64_t bench_seed = 1;
    bench->add_option("--sizes", bench_sizes, "comma-separated instance sizes");
    bench->add_option("--seeds-per-size", bench_seeds, "seeds per size");
    bench->add_option("--algorithm", bench_alg, "auto|cubic|improved|bruteforce");
    bench->add_option("--generator", bench_gen, "uniform|clustered|planted");
    bench->add_option("--separation", bench_separation, "cluster separation");
    bench->add_option("--spread", bench_spread, "cluster spread / planted radius");
    bench->add_option("--seed", bench_seed, "root seed");
    bench->add_option("--mode", bench_mode, "map|solve");

    auto* census = app.add_subcommand("census", "lemma audit and arc-count bound check");
    int census_trials = 10000, census_map_runs = 20;
    std::uint64_t census_seed = 7;
    census->add_option("--trials", census_trials, "number of valid configurations");
    census->add_option("--seed", census_seed, "random seed");
    census->add_option("--map-runs", census_map_runs, "full improved-decision runs to audit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_kind, gen_n, gen_seed, gen_separation, gen_spread, gen_rstar,
                           gen_ratio, gen_format, gen_out);
        if (decide->parsed())
            return cmd_decide(dec_path, dec_format, dec_radius, dec_alg, dec_beta, dec_seed,
                              dec_pred, dec_oracle);
        if (slv->parsed())
            return cmd_solve(slv_path, slv_format, slv_alg, slv_eps, slv_rho, slv_levels, slv_seed,
                             slv_oracle, slv_solution_out);
        if (ver->parsed()) return cmd_verify(ver_path, ver_format, ver_solution, ver_ref);
        if (bench->parsed())
            return cmd_bench(bench_sizes, bench_seeds, bench_alg, bench_gen, bench_separation,
                             bench_spread, bench_seed, bench_mode);
        if (census->parsed()) return cmd_census(census_trials, census_seed, census_map_runs);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const EmptyInstance& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const IntersectionBoundViolated& e) {
        std::cerr << "internal assertion: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
