#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "billiard/scalar.hpp"

namespace billiard {

template <class S>
struct Vec2 {
    S x{}, y{};

    Vec2() = default;
    Vec2(S xx, S yy) : x(std::move(xx)), y(std::move(yy)) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(const S& k) const { return {x * k, y * k}; }

    bool operator==(const Vec2& o) const {
        return ScalarTraits<S>::eq(x, o.x) && ScalarTraits<S>::eq(y, o.y);
    }
};

template <class S>
using Point = Vec2<S>;

template <class S>
S dot(const Vec2<S>& a, const Vec2<S>& b) {
    return a.x * b.x + a.y * b.y;
}

template <class S>
S cross(const Vec2<S>& a, const Vec2<S>& b) {
    return a.x * b.y - a.y * b.x;
}

template <class S>
S norm2(const Vec2<S>& a) {
    return dot(a, a);
}

template <class S>
double norm(const Vec2<S>& a) {
    return std::sqrt(to_double(norm2(a)));
}

template <class S>
Vec2<S> rot90ccw(const Vec2<S>& a) {
    return {-a.y, a.x};
}

namespace detail {
inline void canonicalize_ray(Rat& x, Rat& y) {
    // Scale a rational ray to a coprime integer pair; orientation is kept.
    mpz_class l = lcm(x.get_den(), y.get_den());
    mpz_class ix = x.get_num() * (l / x.get_den());
    mpz_class iy = y.get_num() * (l / y.get_den());
    mpz_class g = gcd(ix, iy);
    if (g != 0) { ix /= g; iy /= g; }
    x = Rat(ix);
    y = Rat(iy);
}
inline void canonicalize_ray(double& x, double& y) {
    double n = std::hypot(x, y);
    x /= n;
    y /= n;
}
}  // namespace detail

/// A direction is a ray through the origin: (dx,dy) up to positive scaling.
/// Exact backend: stored as a coprime integer pair. Float backend: unit vector.
template <class S>
struct Dir {
    Vec2<S> v;

    Dir() : v(ScalarTraits<S>::from_int(1), ScalarTraits<S>::from_int(0)) {}
    explicit Dir(Vec2<S> d) : v(std::move(d)) {
        if (ScalarTraits<S>::sign(v.x) == 0 && ScalarTraits<S>::sign(v.y) == 0)
            throw GeometryError("zero direction");
        detail::canonicalize_ray(v.x, v.y);
    }
    Dir(S dx, S dy) : Dir(Vec2<S>{std::move(dx), std::move(dy)}) {}

    Dir reversed() const { return Dir{-v}; }

    /// Rays coincide: zero cross and positive dot.
    bool operator==(const Dir& o) const {
        return ScalarTraits<S>::sign(cross(v, o.v)) == 0 &&
               ScalarTraits<S>::sign(dot(v, o.v)) > 0;
    }

    /// Angle in [0, 2*pi), a derived float view.
    double angle() const {
        double a = std::atan2(to_double(v.y), to_double(v.x));
        if (a < 0) a += 2 * M_PI;
        return a;
    }
};

template <class S>
Dir<S> dir_from_angle(double phi) {
    return Dir<S>{Vec2<S>{S(std::cos(phi)), S(std::sin(phi))}};
}

/// Distance between two angles on the circle, in [0, pi].
inline double angular_distance(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 2 * M_PI);
    return d > M_PI ? 2 * M_PI - d : d;
}

template <class S>
struct Segment {
    Point<S> a, b;

    Segment() = default;
    Segment(Point<S> pa, Point<S> pb) : a(std::move(pa)), b(std::move(pb)) {
        if (a == b) throw GeometryError("degenerate segment");
    }
    Vec2<S> delta() const { return b - a; }
    double length() const { return norm(delta()); }
    Point<S> midpoint() const {
        S half = ScalarTraits<S>::from_fraction(1, 2);
        return {(a.x + b.x) * half, (a.y + b.y) * half};
    }
};

/// Planar isometry: x -> M x + t with det(M) = +-1.
template <class S>
struct Isometry {
    // row-major linear part
    S m00, m01, m10, m11;
    Vec2<S> t;

    static Isometry identity() {
        S one = ScalarTraits<S>::from_int(1), zero = ScalarTraits<S>::from_int(0);
        return {one, zero, zero, one, {zero, zero}};
    }

    S det() const { return m00 * m11 - m01 * m10; }

    Point<S> apply(const Point<S>& p) const {
        return {m00 * p.x + m01 * p.y + t.x, m10 * p.x + m11 * p.y + t.y};
    }
    Vec2<S> apply_linear(const Vec2<S>& v) const {
        return {m00 * v.x + m01 * v.y, m10 * v.x + m11 * v.y};
    }
    Segment<S> apply(const Segment<S>& s) const { return {apply(s.a), apply(s.b)}; }
    Dir<S> apply(const Dir<S>& d) const { return Dir<S>{apply_linear(d.v)}; }

    /// this ∘ o: first o, then this.
    Isometry compose(const Isometry& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11,
                {m00 * o.t.x + m01 * o.t.y + t.x, m10 * o.t.x + m11 * o.t.y + t.y}};
    }

    Isometry inverse() const {
        S d = det();  // +-1
        Isometry inv{m11 / d, -m01 / d, -m10 / d, m00 / d, {}};
        Vec2<S> it = inv.apply_linear(t);
        inv.t = {-it.x, -it.y};
        return inv;
    }

    bool linear_is_identity() const {
        const auto& T = ScalarTraits<S>::eq;
        S one = ScalarTraits<S>::from_int(1), zero = ScalarTraits<S>::from_int(0);
        return T(m00, one) && T(m11, one) && T(m01, zero) && T(m10, zero);
    }

    bool operator==(const Isometry& o) const {
        const auto& T = ScalarTraits<S>::eq;
        return T(m00, o.m00) && T(m01, o.m01) && T(m10, o.m10) && T(m11, o.m11) &&
               t == o.t;
    }
};

/// Orientation-reversing isometry fixing the line through s; an involution.
template <class S>
Isometry<S> reflect_across_line(const Segment<S>& s) {
    Vec2<S> d = s.delta();
    S n2 = norm2(d);
    if (ScalarTraits<S>::sign(n2) == 0) throw GeometryError("degenerate segment");
    // Linear part: 1/|d|^2 * [dx^2-dy^2, 2 dx dy; 2 dx dy, dy^2-dx^2]
    S two = ScalarTraits<S>::from_int(2);
    Isometry<S> r;
    r.m00 = (d.x * d.x - d.y * d.y) / n2;
    r.m01 = two * d.x * d.y / n2;
    r.m10 = r.m01;
    r.m11 = (d.y * d.y - d.x * d.x) / n2;
    // translation: a - M a for a point a on the line
    Vec2<S> ma = r.apply_linear(s.a);
    r.t = {s.a.x - ma.x, s.a.y - ma.y};
    return r;
}

/// Mirror image of d in the line of s: tangential component kept, normal negated.
template <class S>
Dir<S> reflect_direction(const Dir<S>& d, const Segment<S>& s) {
    Vec2<S> u = s.delta();
    S n2 = norm2(u);
    if (ScalarTraits<S>::sign(n2) == 0) throw GeometryError("degenerate segment");
    S two = ScalarTraits<S>::from_int(2);
    S k = two * dot(d.v, u) / n2;
    return Dir<S>{Vec2<S>{k * u.x - d.v.x, k * u.y - d.v.y}};
}

template <class S>
struct RayHit {
    S t;               // ray parameter of the hit, > 0
    Point<S> point;
    bool at_endpoint;  // hit coincides with an endpoint of the segment
    int endpoint;      // 0 = a, 1 = b, -1 = interior
};

/// First intersection of the open ray origin + t*d (t > 0) with segment s.
/// Collinear overlaps yield no hit.
template <class S>
std::optional<RayHit<S>> ray_segment_intersection(const Point<S>& origin,
                                                  const Dir<S>& d,
                                                  const Segment<S>& s) {
    using T = ScalarTraits<S>;
    Vec2<S> e = s.delta();
    S denom = cross(d.v, e);
    if (T::sign(denom) == 0) return std::nullopt;  // parallel or collinear
    Vec2<S> ao = s.a - origin;
    S t = cross(ao, e) / denom;
    S u = cross(ao, d.v) / denom;
    if (T::sign(t) <= 0) return std::nullopt;
    int su = T::sign(u);
    int su1 = T::sign(u - T::from_int(1));
    if (su < 0 || su1 > 0) return std::nullopt;
    RayHit<S> hit;
    hit.t = t;
    hit.point = {origin.x + d.v.x * t, origin.y + d.v.y * t};
    hit.endpoint = su == 0 ? 0 : (su1 == 0 ? 1 : -1);
    hit.at_endpoint = hit.endpoint >= 0;
    if (hit.endpoint == 0) hit.point = s.a;
    if (hit.endpoint == 1) hit.point = s.b;
    return hit;
}

/// Squared distance from a point to a segment (exact in the rational backend).
template <class S>
S point_segment_dist2(const Point<S>& p, const Segment<S>& s) {
    using T = ScalarTraits<S>;
    Vec2<S> e = s.delta();
    Vec2<S> ap = p - s.a;
    S n2 = norm2(e);
    S proj = dot(ap, e);
    if (T::sign(proj) <= 0) return norm2(ap);
    if (T::sign(proj - n2) >= 0) return norm2(p - s.b);
    S c = cross(e, ap);
    return c * c / n2;
}

/// Open angular sector from u to w counterclockwise; spans at most pi.
/// The empty sector is represented explicitly.
template <class S>
struct Sector {
    Vec2<S> u, w;
    bool empty = false;

    static Sector whole_halfplane(const Vec2<S>& a) {
        // the open sector (a, -a): everything strictly ccw of a within pi
        return Sector{a, -a, false};
    }

    bool contains(const Vec2<S>& d) const {
        if (empty) return false;
        return ScalarTraits<S>::sign(cross(u, d)) > 0 &&
               ScalarTraits<S>::sign(cross(d, w)) > 0;
    }

    /// Weak membership (closure).
    bool contains_closed(const Vec2<S>& d) const {
        if (empty) return false;
        return ScalarTraits<S>::sign(cross(u, d)) >= 0 &&
               ScalarTraits<S>::sign(cross(d, w)) >= 0;
    }

    /// A direction strictly inside the sector.
    Vec2<S> sample() const {
        if (empty) throw GeometryError("sample of empty sector");
        int c = ScalarTraits<S>::sign(cross(u, w));
        if (c > 0) return u + w;
        return rot90ccw(u);  // sector of exactly pi
    }

    Sector intersect(const Sector& o) const {
        if (empty || o.empty) return {u, w, true};
        using T = ScalarTraits<S>;
        Vec2<S> nu = T::sign(cross(u, o.u)) > 0 ? o.u : u;
        Vec2<S> nw = T::sign(cross(w, o.w)) > 0 ? w : o.w;
        Sector r{nu, nw, false};
        int c = T::sign(cross(nu, nw));
        if (c < 0 || (c == 0 && T::sign(dot(nu, nw)) > 0)) r.empty = true;
        // guard against disjoint inputs that slip through the picks
        if (!r.empty) {
            if (!contains_closed(nu) || !o.contains_closed(nu) ||
                !contains_closed(nw) || !o.contains_closed(nw))
                r.empty = true;
        }
        return r;
    }
};

}  // namespace billiard
