#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace twocenter {

inline double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

// A subset of a circle kept as disjoint angular arcs.  Arcs are stored as
// (start, length) with start in [0, 2pi) and length in (0, 2pi].
struct AngleSet {
    bool full = true;
    std::vector<std::pair<double, double>> arcs;

    static AngleSet whole() { return AngleSet{}; }
    static AngleSet none() {
        AngleSet s;
        s.full = false;
        return s;
    }

    bool is_empty() const { return !full && arcs.empty(); }

    double total_length() const {
        if (full) return kTwoPi;
        double t = 0.0;
        for (auto& a : arcs) t += a.second;
        return t;
    }

    // Intersect with the single arc [s, s+len].
    void clip_interval(double s, double len, double min_len = 1e-12) {
        s = wrap_angle(s);
        if (len >= kTwoPi - min_len) {
            if (full) { full = false; arcs = {{0.0, kTwoPi}}; }
            return;
        }
        if (len <= min_len) {
            full = false;
            arcs.clear();
            return;
        }
        if (full) {
            full = false;
            arcs = {{s, len}};
            return;
        }
        std::vector<std::pair<double, double>> out;
        for (auto& [a, la] : arcs) {
            double rel = wrap_angle(a - s);
            // Piece within [0, len] of the constraint frame.
            double lo = rel, hi = rel + la;
            double p0 = std::max(lo, 0.0), p1 = std::min(hi, len);
            if (p1 - p0 > min_len) out.push_back({wrap_angle(s + p0), p1 - p0});
            // Wrapped copy.
            double lo2 = rel - kTwoPi, hi2 = lo2 + la;
            double q0 = std::max(lo2, 0.0), q1 = std::min(hi2, len);
            if (q1 - q0 > min_len) out.push_back({wrap_angle(s + q0), q1 - q0});
        }
        std::sort(out.begin(), out.end());
        arcs = std::move(out);
    }

    // Intersect with { theta : A cos(theta) + B sin(theta) <= C }.
    void clip_halfplane(double A, double B, double C, double eps = 1e-12) {
        double R = std::hypot(A, B);
        if (R <= eps) {
            if (C < -eps) { full = false; arcs.clear(); }
            return;
        }
        double c = C / R;
        if (c >= 1.0 - 1e-15) return;            // whole circle feasible
        if (c <= -1.0 + 1e-15) {                 // nothing feasible
            full = false;
            arcs.clear();
            return;
        }
        double phi0 = std::atan2(B, A);
        double delta = std::acos(c);
        clip_interval(phi0 + delta, kTwoPi - 2.0 * delta);
    }

    void intersect_with(const AngleSet& other) {
        if (other.full) return;
        if (full) {
            *this = other;
            return;
        }
        AngleSet acc = AngleSet::none();
        for (auto& [s, len] : other.arcs) {
            AngleSet piece = *this;
            piece.clip_interval(s, len);
            acc.arcs.insert(acc.arcs.end(), piece.arcs.begin(), piece.arcs.end());
        }
        std::sort(acc.arcs.begin(), acc.arcs.end());
        *this = std::move(acc);
    }

    AngleSet complement(double min_len = 1e-12) const {
        if (full) return AngleSet::none();
        AngleSet out = AngleSet::none();
        if (arcs.empty()) return AngleSet::whole();
        // Gaps between consecutive arcs (arcs are disjoint and sorted).
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            double end_i = arcs[i].first + arcs[i].second;
            double next = (i + 1 < arcs.size()) ? arcs[i + 1].first : arcs[0].first + kTwoPi;
            double gap = next - end_i;
            if (gap > min_len) out.arcs.push_back({wrap_angle(end_i), gap});
        }
        std::sort(out.arcs.begin(), out.arcs.end());
        if (out.arcs.empty()) return AngleSet::none();
        return out;
    }

    void union_with(const AngleSet& other) {
        AngleSet a = complement();
        a.intersect_with(other.complement());
        *this = a.complement();
    }

    // Split arcs at the given angle so that no stored arc strictly contains it.
    void split_at(double t, double min_len = 1e-12) {
        if (full || arcs.empty()) return;
        t = wrap_angle(t);
        std::vector<std::pair<double, double>> out;
        for (auto& [s, len] : arcs) {
            double rel = wrap_angle(t - s);
            if (rel > min_len && rel < len - min_len) {
                out.push_back({s, rel});
                out.push_back({wrap_angle(s + rel), len - rel});
            } else {
                out.push_back({s, len});
            }
        }
        std::sort(out.begin(), out.end());
        arcs = std::move(out);
    }
};

// Halfplane coefficients of a constraint on a circle's angle parameter.
// Points x(theta) = o + rho (cos e1 + sin e2); the constraint is expressed
// as A cos + B sin <= C.
struct CircleConstraint {
    double A = 0.0, B = 0.0, C = 0.0;
    // |x - c| <= r  on the circle (o, rho, frame e1/e2).
    static CircleConstraint inside_ball(const Point3& o, double rho, const Vec3& e1, const Vec3& e2,
                                        const Point3& c, double r) {
        Vec3 w = o - c;
        CircleConstraint cc;
        cc.A = 2.0 * rho * dot(e1, w);
        cc.B = 2.0 * rho * dot(e2, w);
        cc.C = r * r - norm2(w) - rho * rho;
        return cc;
    }
    // |x - c| >= r  (complement side).
    static CircleConstraint outside_ball(const Point3& o, double rho, const Vec3& e1, const Vec3& e2,
                                         const Point3& c, double r) {
        CircleConstraint cc = inside_ball(o, rho, e1, e2, c, r);
        return {-cc.A, -cc.B, -cc.C};
    }
    // n . x >= d  on the circle.
    static CircleConstraint halfspace_ge(const Point3& o, double rho, const Vec3& e1, const Vec3& e2,
                                         const Vec3& n, double d) {
        CircleConstraint cc;
        cc.A = -rho * dot(n, e1);
        cc.B = -rho * dot(n, e2);
        cc.C = dot(n, o) - d;
        return cc;
    }
    CircleConstraint(double a, double b, double c) : A(a), B(b), C(c) {}
    CircleConstraint() = default;
};

inline void clip_circle(AngleSet& set, const CircleConstraint& c, double eps = 1e-12) {
    set.clip_halfplane(c.A, c.B, c.C, eps);
}

} // namespace twocenter
