#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "billiard/geom.hpp"

namespace billiard {

namespace detail {

template <class S>
bool zero_dist2(const S& d2) {
    if constexpr (ScalarTraits<S>::exact) {
        return ScalarTraits<S>::sign(d2) == 0;
    } else {
        double t = float_tolerance();
        return to_double(d2) <= t * t;
    }
}

// Proper or touching intersection of two segments, exact sign tests.
template <class S>
bool segments_cross(const Segment<S>& s1, const Segment<S>& s2, bool count_touch) {
    using T = ScalarTraits<S>;
    auto orient = [](const Point<S>& a, const Point<S>& b, const Point<S>& c) {
        return T::sign(cross(b - a, c - a));
    };
    int o1 = orient(s1.a, s1.b, s2.a);
    int o2 = orient(s1.a, s1.b, s2.b);
    int o3 = orient(s2.a, s2.b, s1.a);
    int o4 = orient(s2.a, s2.b, s1.b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (!count_touch) return false;
    auto on = [&](const Point<S>& p, const Segment<S>& s) {
        return zero_dist2(point_segment_dist2(p, s));
    };
    return (o1 == 0 && on(s2.a, s1)) || (o2 == 0 && on(s2.b, s1)) ||
           (o3 == 0 && on(s1.a, s2)) || (o4 == 0 && on(s1.b, s2));
}

}  // namespace detail

/// Certified interior angles: angle at vertex i equals (num/den)*pi.
using AngleFractions = std::vector<Fraction>;

template <class S>
class Polygon {
  public:
    /// Validates and normalizes a vertex list to a ccw simple polygon.
    /// Rationality certification is attempted with the default denominator cap.
    static Polygon build(std::vector<Point<S>> vertices, long certify_max_den = 200);

    const std::vector<Point<S>>& vertices() const { return verts_; }
    const std::vector<Segment<S>>& sides() const { return sides_; }
    std::size_t size() const { return verts_.size(); }

    /// Side i runs from vertex i to vertex i+1 (mod n).
    const Segment<S>& side(std::size_t i) const { return sides_[i]; }
    const Point<S>& vertex(std::size_t i) const { return verts_[i]; }

    /// Shoelace area, positive.
    const S& area() const { return area_; }

    double diameter() const;
    std::pair<Point<S>, Point<S>> bounding_box() const;

    /// Angle fractions from the build-time certification attempt.
    const std::optional<AngleFractions>& angle_fractions() const { return fractions_; }
    bool is_rational() const { return fractions_.has_value(); }

    bool is_convex() const;

    /// Closed containment.
    bool contains(const Point<S>& p) const;
    bool on_boundary(const Point<S>& p) const;
    /// Vertex index matching p, or nullopt.
    std::optional<std::size_t> vertex_at(const Point<S>& p) const;

    /// Index of the side ending at vertex v (ccw order), i.e. side v-1 mod n.
    std::size_t side_ending_at(std::size_t v) const { return (v + size() - 1) % size(); }
    /// Index of the side starting at vertex v.
    std::size_t side_starting_at(std::size_t v) const { return v; }

  private:
    std::vector<Point<S>> verts_;
    std::vector<Segment<S>> sides_;
    S area_;
    std::optional<AngleFractions> fractions_;
};

// ---------------------------------------------------------------------------

template <class S>
S signed_area2(const std::vector<Point<S>>& v) {
    S acc = ScalarTraits<S>::from_int(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        acc = acc + cross(a, b);
    }
    return acc;
}

/// Unnormalized (sin, cos) of the interior angle at vertex i of a ccw polygon,
/// measured ccw from the outgoing edge to the incoming edge; angle in (0, 2*pi).
template <class S>
std::pair<S, S> interior_angle_sincos(const std::vector<Point<S>>& v, std::size_t i) {
    std::size_t n = v.size();
    Vec2<S> a = v[(i + n - 1) % n] - v[i];
    Vec2<S> b = v[(i + 1) % n] - v[i];
    return {cross(b, a), dot(b, a)};
}

inline double sincos_angle(double s, double c) {
    double ang = std::atan2(s, c);
    if (ang <= 0) ang += 2 * M_PI;
    return ang;
}

/// Best rational approximation p/q of x with 1 <= q <= max_den.
inline Fraction best_rational(double x, long max_den) {
    Fraction best(0, 1);
    double err = std::fabs(x);
    for (long q = 1; q <= max_den; ++q) {
        long p = std::lround(x * q);
        double e = std::fabs(x - static_cast<double>(p) / q);
        if (e < err - 1e-18) {
            err = e;
            best = Fraction(p, q);
        }
    }
    return best;
}

namespace detail {

// Exact test for angle == (p/q)*pi given unnormalized (sin, cos).
// Uses the addition recurrence on the unnormalized pair: the q-fold angle has
// sin(q*theta)*r^q = s_q, so the test is s_q == 0 with the matching cos sign.
template <class S>
bool angle_equals_fraction(const S& s, const S& c, const Fraction& f) {
    S sk = s, ck = c;
    for (long k = 1; k < f.den; ++k) {
        S sn = sk * c + ck * s;
        S cn = ck * c - sk * s;
        sk = sn;
        ck = cn;
    }
    if (ScalarTraits<S>::sign(sk) != 0) return false;
    int want = (f.num % 2 == 0) ? 1 : -1;
    return ScalarTraits<S>::sign(ck) == want;
}

}  // namespace detail

/// Tolerance for float-backend angle certification (radians).
inline constexpr double kAngleTolerance = 1e-9;

/// Certifies every interior angle as (p_i/q_i)*pi with q_i <= max_denominator
/// and exact sum (n-2). Exact backend: equality is exact. Float backend:
/// each angle must be within kAngleTolerance of its fraction.
template <class S>
std::optional<AngleFractions> certify_rational(const Polygon<S>& poly, long max_denominator) {
    if (max_denominator < 1) throw GeometryError("max_denominator must be >= 1");
    const auto& v = poly.vertices();
    AngleFractions out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto [s, c] = interior_angle_sincos(v, i);
        double theta = sincos_angle(to_double(s), to_double(c));
        Fraction f = best_rational(theta / M_PI, max_denominator);
        if (f.num <= 0 || f.num >= 2 * f.den) return std::nullopt;
        if constexpr (ScalarTraits<S>::exact) {
            if (!detail::angle_equals_fraction(s, c, f)) return std::nullopt;
        } else {
            if (std::fabs(theta - f.value() * M_PI) > kAngleTolerance) return std::nullopt;
        }
        out.push_back(f);
    }
    // interior angle sum must be exactly (n-2)*pi
    Rat sum(0);
    for (const auto& f : out) sum += f.rat();
    if (sum != Rat(static_cast<long>(v.size()) - 2)) return std::nullopt;
    return out;
}

template <class S>
Polygon<S> Polygon<S>::build(std::vector<Point<S>> vertices, long certify_max_den) {
    if (vertices.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            if (vertices[i] == vertices[j]) throw GeometryError("repeated vertex");

    S a2 = signed_area2(vertices);
    if (ScalarTraits<S>::sign(a2) == 0) throw GeometryError("zero-area polygon");
    if (ScalarTraits<S>::sign(a2) < 0) {  // clockwise input: normalize
        std::reverse(vertices.begin(), vertices.end());
        a2 = -a2;
    }

    Polygon<S> p;
    p.verts_ = std::move(vertices);
    std::size_t n = p.verts_.size();
    p.sides_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        p.sides_.emplace_back(p.verts_[i], p.verts_[(i + 1) % n]);

    // simplicity: non-adjacent sides must not meet at all
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (detail::segments_cross(p.sides_[i], p.sides_[j], true))
                throw GeometryError("self-intersecting polygon");
        }
    }

    p.area_ = a2 / ScalarTraits<S>::from_int(2);
    p.fractions_ = certify_rational(p, certify_max_den);
    return p;
}

template <class S>
double Polygon<S>::diameter() const {
    double best = 0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        for (std::size_t j = i + 1; j < verts_.size(); ++j)
            best = std::max(best, norm(verts_[j] - verts_[i]));
    return best;
}

template <class S>
std::pair<Point<S>, Point<S>> Polygon<S>::bounding_box() const {
    Point<S> lo = verts_[0], hi = verts_[0];
    for (const auto& v : verts_) {
        if (ScalarTraits<S>::sign(v.x - lo.x) < 0) lo.x = v.x;
        if (ScalarTraits<S>::sign(v.y - lo.y) < 0) lo.y = v.y;
        if (ScalarTraits<S>::sign(v.x - hi.x) > 0) hi.x = v.x;
        if (ScalarTraits<S>::sign(v.y - hi.y) > 0) hi.y = v.y;
    }
    return {lo, hi};
}

template <class S>
bool Polygon<S>::is_convex() const {
    std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2<S> e1 = verts_[(i + 1) % n] - verts_[i];
        Vec2<S> e2 = verts_[(i + 2) % n] - verts_[(i + 1) % n];
        if (ScalarTraits<S>::sign(cross(e1, e2)) < 0) return false;
    }
    return true;
}

template <class S>
bool Polygon<S>::on_boundary(const Point<S>& p) const {
    for (const auto& s : sides_)
        if (detail::zero_dist2(point_segment_dist2(p, s))) return true;
    return false;
}

template <class S>
std::optional<std::size_t> Polygon<S>::vertex_at(const Point<S>& p) const {
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (detail::zero_dist2(norm2(p - verts_[i]))) return i;
    return std::nullopt;
}

template <class S>
bool Polygon<S>::contains(const Point<S>& p) const {
    if (on_boundary(p)) return true;
    // crossing parity with the half-open rule on a +x ray
    using T = ScalarTraits<S>;
    bool inside = false;
    std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point<S>& a = verts_[i];
        const Point<S>& b = verts_[(i + 1) % n];
        bool ay = T::sign(a.y - p.y) > 0;
        bool by = T::sign(b.y - p.y) > 0;
        if (ay == by) continue;
        // x coordinate of the crossing vs p.x
        S num = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        int s = T::sign(num) * T::sign(b.y - a.y);
        if (s > 0) inside = !inside;
    }
    return inside;
}

// ---------------------------------------------------------------------------
// Floors: the finite set of directions a rational polygon induces.

template <class S>
struct FloorSet {
    Dir<S> base;
    std::vector<Dir<S>> directions;  // sorted by angle, closed under reflections

    std::size_t floor_count() const { return directions.size(); }

    std::optional<std::size_t> index_of(const Dir<S>& d) const {
        for (std::size_t i = 0; i < directions.size(); ++i)
            if (directions[i] == d) return i;
        return std::nullopt;
    }
};

/// lcm of the certified angle denominators.
inline long floor_group_order_bound(const AngleFractions& fr) {
    long l = 1;
    for (const auto& f : fr) l = std::lcm(l, f.den);
    return l;
}

/// The group generated by the linear parts of the side reflections
/// (a dihedral group of order <= 2*lcm(q_i) for certified polygons).
template <class S>
std::vector<Isometry<S>> floor_group(const Polygon<S>& p) {
    if (!p.is_rational())
        throw GeometryError("floor group requires a certified rational polygon");
    long bound = 2 * floor_group_order_bound(*p.angle_fractions());
    std::vector<Isometry<S>> gens;
    for (const auto& s : p.sides()) {
        auto r = reflect_across_line(s);
        r.t = {ScalarTraits<S>::from_int(0), ScalarTraits<S>::from_int(0)};
        gens.push_back(r);
    }
    std::vector<Isometry<S>> elems{Isometry<S>::identity()};
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : gens) {
            auto e = g.compose(elems[i]);
            if (std::find(elems.begin(), elems.end(), e) == elems.end())
                elems.push_back(e);
        }
        if (elems.size() > static_cast<std::size_t>(4 * bound))
            throw GeometryError("floor group closure exceeded the dihedral bound");
    }
    return elems;
}

/// Closure of {theta} under the linear parts of all side reflections.
template <class S>
FloorSet<S> direction_floors(const Polygon<S>& p, const Dir<S>& theta) {
    if (!p.is_rational())
        throw GeometryError("direction floors require a certified rational polygon");
    long bound = 2 * floor_group_order_bound(*p.angle_fractions());

    std::vector<Dir<S>> dirs{theta};
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (const auto& s : p.sides()) {
            Dir<S> r = reflect_direction(dirs[i], s);
            if (std::find(dirs.begin(), dirs.end(), r) == dirs.end()) dirs.push_back(r);
        }
        if (dirs.size() > static_cast<std::size_t>(4 * bound))
            throw GeometryError("floor closure exceeded the dihedral bound");
    }
    std::sort(dirs.begin(), dirs.end(),
              [](const Dir<S>& a, const Dir<S>& b) { return a.angle() < b.angle(); });
    return FloorSet<S>{theta, std::move(dirs)};
}

}  // namespace billiard
