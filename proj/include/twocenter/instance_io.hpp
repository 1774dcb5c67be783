#pragma once

#include "geometry.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

namespace twocenter {

using json = nlohmann::ordered_json;

struct Instance {
    std::vector<Point3> points;
    std::string generator;
    std::uint64_t seed = 0;
    bool has_seed = false;
    double planted_rstar = 0.0;
    bool has_planted = false;
    double planted_separation = 0.0;
};

// ======================================================================
// Parsing: CSV (one "x,y,z" per line) and JSON {"points": [[x,y,z],...]}
// ======================================================================

inline Instance parse_instance_csv(std::istream& in) {
    Instance inst;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::istringstream ls(trimmed);
        double v[3];
        char comma;
        for (int k = 0; k < 3; ++k) {
            if (k > 0 && (!(ls >> comma) || comma != ','))
                throw ParseError(lineno, k == 1 ? "missing y" : "missing z");
            if (!(ls >> v[k]))
                throw ParseError(lineno, k == 0 ? "missing x" : (k == 1 ? "missing y" : "missing z"));
        }
        char extra;
        if (ls >> extra) throw ParseError(lineno, "trailing characters");
        Point3 p{v[0], v[1], v[2]};
        if (!finite(p)) throw ParseError(lineno, "non-finite coordinate");
        inst.points.push_back(p);
    }
    if (inst.points.empty()) throw EmptyInstance{};
    return inst;
}

inline Instance parse_instance_json(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(1, e.what());
    }
    Instance inst;
    if (!j.contains("points") || !j["points"].is_array()) throw ParseError(1, "missing points array");
    for (auto& row : j["points"]) {
        if (!row.is_array() || row.size() != 3) throw ParseError(1, "point is not a 3-array");
        Point3 p{row[0].get<double>(), row[1].get<double>(), row[2].get<double>()};
        if (!finite(p)) throw ParseError(1, "non-finite coordinate");
        inst.points.push_back(p);
    }
    if (inst.points.empty()) throw EmptyInstance{};
    if (j.contains("meta")) {
        auto& m = j["meta"];
        if (m.contains("generator")) inst.generator = m["generator"].get<std::string>();
        if (m.contains("seed")) {
            inst.seed = m["seed"].get<std::uint64_t>();
            inst.has_seed = true;
        }
        if (m.contains("planted_rstar")) {
            inst.planted_rstar = m["planted_rstar"].get<double>();
            inst.has_planted = true;
        }
        if (m.contains("planted_separation"))
            inst.planted_separation = m["planted_separation"].get<double>();
    }
    return inst;
}

inline Instance parse_instance(const std::string& path, std::string format = "auto") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    if (format == "auto") {
        if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") format = "json";
        else format = "csv";
    }
    return format == "json" ? parse_instance_json(in) : parse_instance_csv(in);
}

inline json instance_to_json(const Instance& inst) {
    json j;
    j["points"] = json::array();
    for (auto& p : inst.points) j["points"].push_back({p.x, p.y, p.z});
    json meta;
    if (!inst.generator.empty()) meta["generator"] = inst.generator;
    if (inst.has_seed) meta["seed"] = inst.seed;
    if (inst.has_planted) {
        meta["planted_rstar"] = inst.planted_rstar;
        meta["planted_separation"] = inst.planted_separation;
    }
    if (!meta.empty()) j["meta"] = meta;
    return j;
}

inline std::string instance_to_csv(const Instance& inst) {
    std::ostringstream out;
    out.precision(17);
    for (auto& p : inst.points) out << p.x << "," << p.y << "," << p.z << "\n";
    return out.str();
}

// ======================================================================
// Generators
// ======================================================================

inline Instance gen_uniform(int n, std::uint64_t seed, double scale = 2.0) {
    Instance inst;
    inst.generator = "uniform";
    inst.seed = seed;
    inst.has_seed = true;
    Rng rng(derive_seed(seed, 0xF00D));
    for (int i = 0; i < n; ++i)
        inst.points.push_back({rng.uniform(-scale, scale), rng.uniform(-scale, scale),
                               rng.uniform(-scale, scale)});
    return inst;
}

inline Instance gen_clustered(int n, std::uint64_t seed, double separation = 6.0,
                              double spread = 1.0) {
    Instance inst;
    inst.generator = "clustered";
    inst.seed = seed;
    inst.has_seed = true;
    Rng rng(derive_seed(seed, 0xC105));
    Vec3 axis = rng.unit_vector();
    Point3 offset = rng.in_ball({0, 0, 0}, separation / 3.0);
    Point3 ca = offset + axis * (separation / 2.0);
    Point3 cb = offset - axis * (separation / 2.0);
    for (int i = 0; i < n; ++i) inst.points.push_back(rng.in_ball(i % 2 ? ca : cb, spread));
    return inst;
}

// Two centers at the given separation, points scattered inside balls of the
// planted radius; records the planted upper bound on r*.
inline Instance gen_planted(int n, std::uint64_t seed, double rstar = 1.0,
                            double separation = 6.0) {
    Instance inst;
    inst.generator = "planted";
    inst.seed = seed;
    inst.has_seed = true;
    inst.planted_rstar = rstar;
    inst.has_planted = true;
    inst.planted_separation = separation;
    Rng rng(derive_seed(seed, 0x9147));
    Vec3 axis = rng.unit_vector();
    Point3 offset = rng.in_ball({0, 0, 0}, 1.0);
    Point3 ca = offset + axis * (separation / 2.0);
    Point3 cb = offset - axis * (separation / 2.0);
    for (int i = 0; i < n; ++i) inst.points.push_back(rng.in_ball(i % 2 ? ca : cb, rstar));
    return inst;
}

// Exact planted ratio r*/r0 via two collinear pairs (used by the
// exponential-search bracketing checks).
inline Instance gen_planted_ratio(double ratio, std::uint64_t seed = 0) {
    Instance inst;
    inst.generator = "planted-ratio";
    inst.seed = seed;
    inst.has_seed = true;
    double w = 1.0;
    double a = w * (1.0 - ratio) / ratio;
    inst.points = {{-a - w, 0, 0}, {-a + w, 0, 0}, {a - w, 0, 0}, {a + w, 0, 0}};
    inst.planted_rstar = w;
    inst.has_planted = true;
    inst.planted_separation = 2.0 * a;
    return inst;
}

// ======================================================================
// Reports
// ======================================================================

inline json solution_to_json(const TwoCenterSolution& sol) {
    json j;
    j["c1"] = {sol.c1.x, sol.c1.y, sol.c1.z};
    j["c2"] = {sol.c2.x, sol.c2.y, sol.c2.z};
    j["radius"] = sol.radius;
    j["side1"] = sol.side1;
    j["side2"] = sol.side2;
    j["approximate"] = sol.approximate;
    return j;
}

inline const char* variant_name(DecisionVariant v) {
    switch (v) {
        case DecisionVariant::StrictlyCoverable: return "StrictlyCoverable";
        case DecisionVariant::ExactlyCritical: return "ExactlyCritical";
        default: return "NotCoverable";
    }
}

inline json stats_to_json(const SolverStats& st) {
    json j;
    j["cells_visited"] = st.cells_visited;
    j["m_vertices"] = st.m_vertices;
    j["guesses"] = st.guesses;
    j["decisions"] = st.decisions;
    j["perturbations"] = st.perturbations;
    j["exp_search_steps"] = st.exp_search_steps;
    j["beta_used"] = st.beta_used;
    return j;
}

// Re-check a solution against an instance: every point must lie within
// radius (+tol) of its assigned center, or of some center when the
// partition is not given.
inline bool verify_solution(const std::vector<Point3>& pts, const TwoCenterSolution& sol,
                            const Tolerance& tol = default_tolerance()) {
    double r = sol.radius;
    double e = 1e4 * tol.eps(r);
    std::vector<bool> assigned(pts.size(), false);
    for (int i : sol.side1) {
        if (i < 0 || i >= static_cast<int>(pts.size())) return false;
        if (dist(pts[i], sol.c1) > r + e) return false;
        assigned[i] = true;
    }
    for (int i : sol.side2) {
        if (i < 0 || i >= static_cast<int>(pts.size())) return false;
        if (dist(pts[i], sol.c2) > r + e) return false;
        assigned[i] = true;
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!assigned[i] &&
            std::min(dist(pts[i], sol.c1), dist(pts[i], sol.c2)) > r + e)
            return false;
    return true;
}

inline TwoCenterSolution solution_from_json(const json& j) {
    TwoCenterSolution sol;
    auto& c1 = j.at("c1");
    auto& c2 = j.at("c2");
    sol.c1 = {c1[0].get<double>(), c1[1].get<double>(), c1[2].get<double>()};
    sol.c2 = {c2[0].get<double>(), c2[1].get<double>(), c2[2].get<double>()};
    sol.radius = j.at("radius").get<double>();
    if (j.contains("side1")) sol.side1 = j["side1"].get<std::vector<int>>();
    if (j.contains("side2")) sol.side2 = j["side2"].get<std::vector<int>>();
    if (j.contains("approximate")) sol.approximate = j["approximate"].get<bool>();
    return sol;
}

} // namespace twocenter
