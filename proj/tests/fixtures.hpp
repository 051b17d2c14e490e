#pragma once

#include <random>
#include <vector>

#include "billiard/billiard.hpp"

namespace fixtures {

using namespace billiard;

template <class S>
Point<S> pt(long x, long y) {
    return {ScalarTraits<S>::from_int(x), ScalarTraits<S>::from_int(y)};
}

template <class S>
Point<S> ptf(long xn, long xd, long yn, long yd) {
    return {ScalarTraits<S>::from_fraction(xn, xd), ScalarTraits<S>::from_fraction(yn, yd)};
}

template <class S>
Polygon<S> unit_square() {
    return Polygon<S>::build({pt<S>(0, 0), pt<S>(1, 0), pt<S>(1, 1), pt<S>(0, 1)});
}

// 45-45-90 triangle with legs on the axes.
template <class S>
Polygon<S> right_triangle() {
    return Polygon<S>::build({pt<S>(0, 0), pt<S>(1, 0), pt<S>(0, 1)});
}

template <class S>
Polygon<S> diamond() {
    return Polygon<S>::build({pt<S>(1, 0), pt<S>(0, 1), pt<S>(-1, 0), pt<S>(0, -1)});
}

/// Uniformish random rational in (0,1) with a moderate denominator.
template <class S>
S rand01(std::mt19937& rng, long maxden = 997) {
    std::uniform_int_distribution<long> dd(2, maxden);
    long d = dd(rng);
    std::uniform_int_distribution<long> nn(1, d - 1);
    return ScalarTraits<S>::from_fraction(nn(rng), d);
}

/// Random interior point of p (rejection from the bounding box).
template <class S>
Point<S> random_interior_point(const Polygon<S>& p, std::mt19937& rng) {
    auto [lo, hi] = p.bounding_box();
    for (;;) {
        Point<S> q{lo.x + (hi.x - lo.x) * rand01<S>(rng), lo.y + (hi.y - lo.y) * rand01<S>(rng)};
        if (p.contains(q) && !p.on_boundary(q)) return q;
    }
}

/// Random direction with small integer components.
template <class S>
Dir<S> random_direction(std::mt19937& rng, long cap = 20) {
    std::uniform_int_distribution<long> cc(-cap, cap);
    for (;;) {
        long x = cc(rng), y = cc(rng);
        if (x == 0 && y == 0) continue;
        return Dir<S>{ScalarTraits<S>::from_int(x), ScalarTraits<S>::from_int(y)};
    }
}

}  // namespace fixtures
