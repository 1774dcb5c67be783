#pragma once

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

namespace twocenter {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ======================================================================
// Vectors and points
// ======================================================================

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

using Point3 = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double dist2(const Vec3& a, const Vec3& b) { return norm2(a - b); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) throw GeometryError("cannot normalize zero vector");
    return v / n;
}

inline bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// ======================================================================
// Tolerance policy: |a - b| <= eps_abs + eps_rel * max(|a|,|b|)
// ======================================================================

struct Tolerance {
    double eps_abs = 1e-9;
    double eps_rel = 1e-9;

    Tolerance() = default;
    Tolerance(double abs_, double rel_) : eps_abs(abs_), eps_rel(rel_) {}

    double eps(double a, double b = 0.0) const {
        return eps_abs + eps_rel * std::max(std::abs(a), std::abs(b));
    }
    bool close(double a, double b) const { return std::abs(a - b) <= eps(a, b); }
    bool le(double a, double b) const { return a <= b + eps(a, b); }
    bool lt(double a, double b) const { return a < b - eps(a, b); }
    bool ge(double a, double b) const { return le(b, a); }
    bool gt(double a, double b) const { return lt(b, a); }
    // Sign of v at a given magnitude scale; 0 inside the tolerance band.
    int sign(double v, double scale = 0.0) const {
        double e = eps(v, scale);
        if (v > e) return 1;
        if (v < -e) return -1;
        return 0;
    }
};

inline const Tolerance& default_tolerance() {
    static const Tolerance tol{};
    return tol;
}

// ======================================================================
// Directions, planes, balls, circles, arcs
// ======================================================================

struct Direction {
    Vec3 v{1.0, 0.0, 0.0};

    Direction() = default;
    explicit Direction(const Vec3& raw) : v(normalized(raw)) {}
    Direction(double x, double y, double z) : Direction(Vec3{x, y, z}) {}

    double x() const { return v.x; }
    double y() const { return v.y; }
    double z() const { return v.z; }
};

// Plane { p : normal . p = offset } with unit normal.
struct Plane {
    Direction normal;
    double offset = 0.0;

    Plane() = default;
    Plane(const Direction& n, double d) : normal(n), offset(d) {}
    static Plane from_raw(const Vec3& n, double d) {
        double len = norm(n);
        if (len == 0.0) throw GeometryError("plane with zero normal");
        return Plane(Direction(n), d / len);
    }

    double signed_dist(const Point3& p) const { return dot(normal.v, p) - offset; }
};

inline int side_of_plane(const Point3& p, const Plane& h, const Tolerance& tol = default_tolerance()) {
    double v = dot(h.normal.v, p);
    return tol.sign(v - h.offset, std::max(std::abs(v), std::abs(h.offset)));
}

struct Ball {
    Point3 center;
    double radius = 0.0;

    Ball() = default;
    Ball(const Point3& c, double r) : center(c), radius(r) {
        if (r < 0.0) throw GeometryError("negative ball radius");
    }
    bool contains(const Point3& p, const Tolerance& tol = default_tolerance()) const {
        return tol.le(dist(center, p), radius);
    }
};

// In-plane frame derived deterministically from a normal: pivot on the
// smallest-magnitude component (lowest index on ties).
inline std::pair<Vec3, Vec3> orthonormal_frame(const Vec3& unit_normal) {
    double ax = std::abs(unit_normal.x), ay = std::abs(unit_normal.y), az = std::abs(unit_normal.z);
    Vec3 pivot;
    if (ax <= ay && ax <= az) pivot = {1, 0, 0};
    else if (ay <= az) pivot = {0, 1, 0};
    else pivot = {0, 0, 1};
    Vec3 e1 = normalized(cross(unit_normal, pivot));
    Vec3 e2 = cross(unit_normal, e1);
    return {e1, e2};
}

struct Circle3 {
    Point3 center;
    double radius = 0.0;
    Direction normal;

    Circle3() = default;
    Circle3(const Point3& c, double r, const Direction& n) : center(c), radius(r), normal(n) {
        if (r < 0.0) throw GeometryError("negative circle radius");
    }

    std::pair<Vec3, Vec3> frame() const { return orthonormal_frame(normal.v); }

    Point3 point_at(double theta) const {
        auto [e1, e2] = frame();
        return center + (e1 * std::cos(theta) + e2 * std::sin(theta)) * radius;
    }
    // Angle of the projection of p onto the circle plane, in the canonical frame.
    double angle_of(const Point3& p) const {
        auto [e1, e2] = frame();
        Vec3 d = p - center;
        return std::atan2(dot(d, e2), dot(d, e1));
    }
};

struct Arc3 {
    Circle3 circle;
    double theta0 = 0.0;
    double theta1 = 0.0; // theta1 - theta0 in [0, 2pi]

    Arc3() = default;
    Arc3(const Circle3& c, double t0, double t1) : circle(c), theta0(t0), theta1(t1) {}

    double length_angle() const { return theta1 - theta0; }
    Point3 point_at_param(double t) const { return circle.point_at(theta0 + t * (theta1 - theta0)); }
    Point3 start() const { return circle.point_at(theta0); }
    Point3 end() const { return circle.point_at(theta1); }
    Point3 midpoint() const { return point_at_param(0.5); }
};

// ======================================================================
// Point-plane duality: (x,y,z) -> { w = x u + y v - z }
// ======================================================================

inline Plane dualize_point(const Point3& p) {
    if (!finite(p)) throw GeometryError("cannot dualize non-finite point");
    // w = p.x u + p.y v - p.z  <=>  (-p.x) u + (-p.y) v + w = -p.z
    return Plane::from_raw({-p.x, -p.y, 1.0}, -p.z);
}

inline Point3 dualize_plane(const Plane& h, const Tolerance& tol = default_tolerance()) {
    double nz = h.normal.z();
    if (std::abs(nz) <= tol.eps_abs) throw VerticalPlane{};
    double s = nz > 0 ? 1.0 : -1.0;
    Vec3 n = h.normal.v * s;
    double d = h.offset * s;
    double a = -n.x / n.z;
    double b = -n.y / n.z;
    double c = d / n.z;
    return {a, b, -c};
}

// Sign of w minus the plane's graph value at (u, v); +1 means above.
inline int side_above_plane(const Point3& q, const Plane& h, const Tolerance& tol = default_tolerance()) {
    double nz = h.normal.z();
    if (std::abs(nz) <= tol.eps_abs) throw VerticalPlane{};
    double s = nz > 0 ? 1.0 : -1.0;
    // With n.z > 0, normal.q - offset has the sign of q.w - (a u + b v + c).
    double v = s * (dot(h.normal.v, q) - h.offset);
    return tol.sign(v, std::abs(h.offset));
}

// ======================================================================
// Sphere-sphere intersection
// ======================================================================

struct SphereIntersection {
    enum class Kind { Circle, Tangent, Disjoint, Nested };
    Kind kind = Kind::Disjoint;
    Circle3 circle;   // valid when kind == Circle
    Point3 point;     // valid when kind == Tangent
};

inline SphereIntersection sphere_sphere_intersect(const Ball& a, const Ball& b,
                                                  const Tolerance& tol = default_tolerance()) {
    if (a.radius <= 0.0 || b.radius <= 0.0) throw GeometryError("sphere_sphere_intersect needs positive radii");
    double d = dist(a.center, b.center);
    double scale = std::max({a.radius, b.radius, d});
    double e = tol.eps(scale);
    SphereIntersection out;
    if (d <= e) {
        if (std::abs(a.radius - b.radius) <= e) throw ConcentricEqual{};
        out.kind = SphereIntersection::Kind::Nested;
        return out;
    }
    double sum = a.radius + b.radius;
    double diff = std::abs(a.radius - b.radius);
    if (d > sum + e) {
        out.kind = SphereIntersection::Kind::Disjoint;
        return out;
    }
    Vec3 u = (b.center - a.center) / d;
    if (std::abs(d - sum) <= e) {
        out.kind = SphereIntersection::Kind::Tangent;
        out.point = a.center + u * a.radius;
        return out;
    }
    if (d < diff - e) {
        out.kind = SphereIntersection::Kind::Nested;
        return out;
    }
    if (std::abs(d - diff) <= e) {
        out.kind = SphereIntersection::Kind::Tangent;
        out.point = a.radius >= b.radius ? a.center + u * a.radius : a.center - u * a.radius;
        return out;
    }
    double h = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    double rho2 = a.radius * a.radius - h * h;
    if (rho2 <= 0.0) {
        // Numerically squeezed tangency.
        out.kind = SphereIntersection::Kind::Tangent;
        out.point = a.center + u * h;
        return out;
    }
    out.kind = SphereIntersection::Kind::Circle;
    out.circle = Circle3(a.center + u * h, std::sqrt(rho2), Direction(u));
    return out;
}

// ======================================================================
// Canonical orientation set D
// ======================================================================

// Angular margin available for guessing a separating plane at separation
// ratio beta: acos(beta/4) - acos(beta/2).
inline double coverage_angle(double beta) {
    if (!(beta > 0.0) || beta > 2.0) throw InvalidBeta(beta);
    return std::acos(beta / 4.0) - std::acos(beta / 2.0);
}

// |D| <= kDirectionSetConstant / alpha^2 for the grid below.
inline constexpr double kDirectionSetConstant = 40.0;

inline std::vector<Direction> canonical_directions(double beta) {
    double alpha = std::min(coverage_angle(beta), kPi / 4.0);
    double step = alpha / std::sqrt(2.0);
    int rings = static_cast<int>(std::ceil(kPi / step));
    std::vector<Direction> dirs;
    for (int i = 0; i <= rings; ++i) {
        double theta = std::min(kPi, i * step);
        double s = std::sin(theta);
        int m = std::max(1, static_cast<int>(std::ceil(kTwoPi * s / step)));
        for (int j = 0; j < m; ++j) {
            double phi = kTwoPi * j / m;
            dirs.emplace_back(Vec3{s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
        }
        if (theta >= kPi) break;
    }
    return dirs;
}

// ======================================================================
// Rotated frames
// ======================================================================

// Orthonormal frame whose first axis is v; apply() maps world coordinates
// into the rotated frame (x' = v . p).
struct Frame3 {
    Vec3 ex, ey, ez;

    static Frame3 with_x_axis(const Direction& v) {
        auto [e1, e2] = orthonormal_frame(v.v);
        return {v.v, e1, e2};
    }
    Vec3 apply(const Vec3& p) const { return {dot(ex, p), dot(ey, p), dot(ez, p)}; }
    Vec3 apply_inverse(const Vec3& q) const { return ex * q.x + ey * q.y + ez * q.z; }
};

// ======================================================================
// Seeded randomness (derived streams keep concurrent runs reproducible)
// ======================================================================

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    std::uint64_t s = root ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(eng);
    }
    int uniform_int(int a, int b) { // inclusive
        return std::uniform_int_distribution<int>(a, b)(eng);
    }
    Vec3 unit_vector() {
        while (true) {
            Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
            double n2 = norm2(v);
            if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }
    Vec3 in_ball(const Point3& c, double r) {
        while (true) {
            Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
            if (norm2(v) <= 1.0) return c + v * r;
        }
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(eng);
            std::swap(v[i - 1], v[j]);
        }
    }
};

// ======================================================================
// Point deduplication with a tolerance (grid snap + neighbor probe)
// ======================================================================

struct PointDedup {
    double cell;
    std::vector<Point3> points;

    explicit PointDedup(double cell_size) : cell(cell_size) {}

    int insert(const Point3& p) {
        long kx = static_cast<long>(std::floor(p.x / cell));
        long ky = static_cast<long>(std::floor(p.y / cell));
        long kz = static_cast<long>(std::floor(p.z / cell));
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = grid_.find(key(kx + dx, ky + dy, kz + dz));
                    if (it == grid_.end()) continue;
                    for (int id : it->second)
                        if (dist(points[id], p) <= cell) return id;
                }
        int id = static_cast<int>(points.size());
        points.push_back(p);
        grid_[key(kx, ky, kz)].push_back(id);
        return id;
    }

  private:
    static std::uint64_t mix(long v) {
        std::uint64_t s = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
        return splitmix64(s);
    }
    static std::uint64_t key(long a, long b, long c) {
        return mix(a) ^ (mix(b) * 3) ^ (mix(c) * 7);
    }
    std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

} // namespace twocenter
