#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "billiard/periodic.hpp"

namespace billiard {

/// Disk of diameter 1/max(q,s) around a fully reduced rational center,
/// intersected with the table.
template <class S>
struct BasisRegion {
    Fraction cx, cy;      // center (cx, cy), lowest terms
    Fraction diameter;    // exactly 1/max(cx.den, cy.den)
    Point<S> center;
    S radius;
    double area = 0;           // area of disk ∩ Q
    double area_fraction = 0;  // area / area(Q)
};

// ---------------------------------------------------------------------------
// Disk–polygon intersection area: per-edge decomposition into chord triangles
// (midpoint inside the disk) and circular sectors (midpoint outside), summed
// with Green's theorem. Doubles throughout; pi enters.

namespace detail {

inline double edge_disk_contrib(double ax, double ay, double bx, double by, double r) {
    // contribution of the directed edge a->b for the disk centered at origin
    double dx = bx - ax, dy = by - ay;
    double A = dx * dx + dy * dy;
    double B = 2 * (ax * dx + ay * dy);
    double C = ax * ax + ay * ay - r * r;
    double ts[4] = {0, 1, 1, 1};
    int nt = 2;
    double disc = B * B - 4 * A * C;
    if (disc > 0) {
        double sq = std::sqrt(disc);
        double t1 = (-B - sq) / (2 * A), t2 = (-B + sq) / (2 * A);
        if (t1 > 0 && t1 < 1) ts[nt++] = t1;
        if (t2 > 0 && t2 < 1) ts[nt++] = t2;
    }
    std::sort(ts, ts + nt);
    double total = 0;
    for (int i = 0; i + 1 < nt; ++i) {
        double t0 = ts[i], t1 = ts[i + 1];
        if (t1 - t0 <= 0) continue;
        double px = ax + t0 * dx, py = ay + t0 * dy;
        double qx = ax + t1 * dx, qy = ay + t1 * dy;
        double mt = (t0 + t1) / 2;
        double mx = ax + mt * dx, my = ay + mt * dy;
        if (mx * mx + my * my <= r * r) {
            total += (px * qy - py * qx) / 2;  // triangle with the center
        } else {
            double ang = std::atan2(px * qy - py * qx, px * qx + py * qy);
            total += r * r * ang / 2;  // circular sector
        }
    }
    return total;
}

}  // namespace detail

/// Area of (open disk) ∩ polygon. Relative error is at the level of double
/// rounding (~1e-12) away from tangency configurations.
template <class S>
double disk_polygon_area(const Polygon<S>& p, const Point<S>& center, double radius) {
    if (radius <= 0) throw GeometryError("radius must be positive");
    double cx = to_double(center.x), cy = to_double(center.y);
    double total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Segment<S>& s = p.side(i);
        total += detail::edge_disk_contrib(to_double(s.a.x) - cx, to_double(s.a.y) - cy,
                                           to_double(s.b.x) - cx, to_double(s.b.y) - cy,
                                           radius);
    }
    return std::max(0.0, total);
}

/// All basis regions of diameter > epsilon whose disk meets the polygon.
/// Nonemptiness is decided with exact arithmetic in the rational backend.
template <class S>
std::vector<BasisRegion<S>> enumerate_basis(const Polygon<S>& p, double epsilon) {
    if (!(epsilon > 0 && epsilon < 1)) throw GeometryError("epsilon must be in (0,1)");
    using T = ScalarTraits<S>;
    auto [lo, hi] = p.bounding_box();
    double lox = to_double(lo.x), hix = to_double(hi.x);
    double loy = to_double(lo.y), hiy = to_double(hi.y);
    double parea = to_double(p.area());

    std::vector<BasisRegion<S>> out;
    long maxden = static_cast<long>(std::floor(1.0 / epsilon));
    while (maxden >= 1 && !(1.0 / static_cast<double>(maxden) > epsilon)) --maxden;
    for (long q = 1; q <= maxden; ++q) {
        for (long s = 1; s <= maxden; ++s) {
            long md = std::max(q, s);
            double r = 1.0 / (2.0 * md);
            long plo = static_cast<long>(std::ceil((lox - r) * q));
            long phi = static_cast<long>(std::floor((hix + r) * q));
            long rlo = static_cast<long>(std::ceil((loy - r) * s));
            long rhi = static_cast<long>(std::floor((hiy + r) * s));
            for (long pn = plo; pn <= phi; ++pn) {
                if (std::gcd(std::abs(pn), q) != 1) continue;
                for (long rn = rlo; rn <= rhi; ++rn) {
                    if (std::gcd(std::abs(rn), s) != 1) continue;
                    BasisRegion<S> reg;
                    reg.cx = Fraction{pn, q};
                    reg.cy = Fraction{rn, s};
                    reg.diameter = Fraction{1, md};
                    reg.center = {T::from_fraction(pn, q), T::from_fraction(rn, s)};
                    reg.radius = T::from_fraction(1, 2 * md);
                    // nonempty: center strictly within radius of Q
                    S d2;
                    if (p.contains(reg.center)) {
                        d2 = T::from_int(0);
                    } else {
                        bool first = true;
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            S cand = point_segment_dist2(reg.center, p.side(i));
                            if (first || T::sign(cand - d2) < 0) d2 = cand;
                            first = false;
                        }
                    }
                    if (T::sign(d2 - reg.radius * reg.radius) >= 0) continue;
                    reg.area = disk_polygon_area(p, reg.center, to_double(reg.radius));
                    reg.area_fraction = reg.area / parea;
                    out.push_back(std::move(reg));
                }
            }
        }
    }
    return out;
}

/// Chord length of a segment inside an open disk.
inline double chord_disk_length(double ax, double ay, double bx, double by,
                                double cx, double cy, double r) {
    double dx = bx - ax, dy = by - ay;
    double len2 = dx * dx + dy * dy;
    double fx = ax - cx, fy = ay - cy;
    double A = len2;
    double B = 2 * (fx * dx + fy * dy);
    double C = fx * fx + fy * fy - r * r;
    double disc = B * B - 4 * A * C;
    if (disc <= 0) return 0;
    double sq = std::sqrt(disc);
    double t0 = std::max(0.0, (-B - sq) / (2 * A));
    double t1 = std::min(1.0, (-B + sq) / (2 * A));
    if (t1 <= t0) return 0;
    return (t1 - t0) * std::sqrt(len2);
}

/// Total length of the orbit's links inside the region's disk.
template <class S>
double orbit_region_length(const Orbit<S>& o, const BasisRegion<S>& r) {
    double cx = to_double(r.center.x), cy = to_double(r.center.y);
    double rad = to_double(r.radius);
    double total = 0;
    for (const auto& link : o.links)
        total += chord_disk_length(to_double(link.a.x), to_double(link.a.y),
                                   to_double(link.b.x), to_double(link.b.y), cx, cy, rad);
    return total;
}

template <class S>
struct RegionStat {
    BasisRegion<S> region;
    double length_fraction = 0, area_fraction = 0, discrepancy = 0;
};

template <class S>
struct DiscrepancyReport {
    double epsilon = 0;
    std::vector<RegionStat<S>> per_region;
    double sup_discrepancy = 0;
    bool well_distributed = false;
};

/// Eq.-(1) discrepancy over the admissible basis. Periodic orbits are measured
/// over one period; otherwise the whole traced segment counts.
template <class S>
DiscrepancyReport<S> discrepancy(const Polygon<S>& p, const Orbit<S>& o, double epsilon) {
    DiscrepancyReport<S> rep;
    rep.epsilon = epsilon;
    std::size_t first = 0, count = o.links.size();
    if (o.periodic) {
        first = o.start_on_boundary ? 0 : 1;
        count = o.periodic->first;
    }
    if (count == 0) throw GeometryError("orbit has no links");
    Orbit<S> window;
    window.links.assign(o.links.begin() + first, o.links.begin() + first + count);
    double total = 0;
    for (const auto& l : window.links) total += l.length();
    if (total <= 0) throw GeometryError("zero-length orbit");

    for (auto& reg : enumerate_basis(p, epsilon)) {
        RegionStat<S> st;
        st.area_fraction = reg.area_fraction;
        st.length_fraction = orbit_region_length(window, reg) / total;
        st.discrepancy = std::fabs(st.length_fraction - st.area_fraction);
        st.region = std::move(reg);
        rep.sup_discrepancy = std::max(rep.sup_discrepancy, st.discrepancy);
        rep.per_region.push_back(std::move(st));
    }
    rep.well_distributed = rep.sup_discrepancy < epsilon;
    return rep;
}

// ---------------------------------------------------------------------------

template <class S>
struct DensityReport {
    double epsilon = 0;
    std::optional<Point<S>> uncovered_witness;
    std::optional<std::size_t> witness_floor;  // surface mode only
    bool dense = false;
    double grid_spacing = 0;
};

namespace detail {

/// Exact check that q is farther than eps from every listed segment.
template <class S>
bool certified_far(const Point<S>& q, const std::vector<const Segment<S>*>& links,
                   const S& eps) {
    using T = ScalarTraits<S>;
    S e2 = eps * eps;
    for (const Segment<S>* l : links)
        if (T::sign(point_segment_dist2(q, *l) - e2) <= 0) return false;
    return true;
}

template <class S>
std::optional<Point<S>> grid_witness(const Polygon<S>& p,
                                     const std::vector<const Segment<S>*>& links,
                                     double epsilon, double spacing) {
    using T = ScalarTraits<S>;
    auto [lo, hi] = p.bounding_box();
    double lox = to_double(lo.x), hix = to_double(hi.x);
    double loy = to_double(lo.y), hiy = to_double(hi.y);
    S eps = S(epsilon);
    long nx = static_cast<long>(std::ceil((hix - lox) / spacing));
    long ny = static_cast<long>(std::ceil((hiy - loy) / spacing));
    for (long i = 0; i <= nx; ++i) {
        for (long j = 0; j <= ny; ++j) {
            Point<S> g{S(lox) + S(spacing) * T::from_int(i),
                       S(loy) + S(spacing) * T::from_int(j)};
            if (!p.contains(g)) continue;
            if (certified_far(g, links, eps)) return g;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Grid density check with spacing epsilon/4. A witness certifies non-density
/// exactly; a clean pass certifies density at epsilon plus the grid slack.
/// Surface mode demands coverage separately by the links of each floor.
template <class S>
DensityReport<S> epsilon_dense(const Polygon<S>& p, const Orbit<S>& o, double epsilon,
                               bool surface = false) {
    if (!(epsilon > 0)) throw GeometryError("epsilon must be positive");
    DensityReport<S> rep;
    rep.epsilon = epsilon;
    rep.grid_spacing = epsilon / 4;
    if (!surface) {
        std::vector<const Segment<S>*> links;
        for (const auto& l : o.links) links.push_back(&l);
        rep.uncovered_witness = detail::grid_witness(p, links, epsilon, rep.grid_spacing);
        rep.dense = !rep.uncovered_witness;
        return rep;
    }
    Dir<S> d0{o.links.front().delta()};
    auto floors = direction_floors(p, d0);
    for (std::size_t f = 0; f < floors.floor_count(); ++f) {
        std::vector<const Segment<S>*> links;
        for (const auto& l : o.links)
            if (auto idx = floors.index_of(Dir<S>{l.delta()}); idx && *idx == f)
                links.push_back(&l);
        auto w = detail::grid_witness(p, links, epsilon, rep.grid_spacing);
        if (w) {
            rep.uncovered_witness = w;
            rep.witness_floor = f;
            rep.dense = false;
            return rep;
        }
    }
    rep.dense = true;
    return rep;
}

// ---------------------------------------------------------------------------

template <class S>
struct ScanReport {
    std::size_t grid = 0;
    std::vector<std::pair<Point<S>, bool>> points;  // sample, covered
    std::vector<Cylinder<S>> strips;
    double coverage_fraction = 0;
    WordSearchStats<S> search_stats;
};

/// Empirical A^δ_ε(θ) scan: one windowed word search, then each grid sample is
/// covered when some found strip passes through it with an ε-well-distributed
/// periodic orbit.
template <class S>
ScanReport<S> scan_A_set(const Polygon<S>& p, double theta, double delta, double epsilon,
                         std::size_t grid, std::size_t budget,
                         std::size_t max_word = 24) {
    if (!p.is_rational()) throw GeometryError("scan_A_set requires a rational polygon");
    ScanReport<S> rep;
    rep.grid = grid;

    WordSearchOptions<S> opt;
    opt.max_word = max_word;
    opt.window = std::make_pair(theta, delta);
    opt.node_budget = budget;
    rep.strips = word_search(p, opt, &rep.search_stats);

    auto [lo, hi] = p.bounding_box();
    std::size_t covered = 0, inside = 0;
    using T = ScalarTraits<S>;
    for (std::size_t i = 1; i <= grid; ++i) {
        for (std::size_t j = 1; j <= grid; ++j) {
            S fx = T::from_fraction(static_cast<long>(i), static_cast<long>(grid + 1));
            S fy = T::from_fraction(static_cast<long>(j), static_cast<long>(grid + 1));
            Point<S> q{lo.x + (hi.x - lo.x) * fx, lo.y + (hi.y - lo.y) * fy};
            if (!p.contains(q) || p.on_boundary(q)) continue;
            ++inside;
            bool ok = false;
            for (const auto& cyl : rep.strips) {
                if (!cylinder_contains(p, cyl, q)) continue;
                auto o = trace(p, PhasePoint<S>{q, cyl.direction, {}}, cyl.period_links + 2);
                if (o.periodic && discrepancy(p, o, epsilon).well_distributed) {
                    ok = true;
                    break;
                }
            }
            if (ok) ++covered;
            rep.points.emplace_back(q, ok);
        }
    }
    rep.coverage_fraction = inside ? static_cast<double>(covered) / inside : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------

template <class S>
struct CEpsilonCandidate {
    Dir<S> direction;  // direction of the carrying generalized diagonal
    Orbit<S> witness;  // periodic, certified non-epsilon-dense
    Point<S> witness_point;
};

/// Directions carrying generalized diagonals of length <= max_links, each with
/// a certified non-ε-dense orbit when one can be exhibited from a deterministic
/// start-point set (side midpoints plus an interior grid).
template <class S>
std::vector<CEpsilonCandidate<S>> c_epsilon_candidates(const Polygon<S>& p, double epsilon,
                                                       std::size_t max_links,
                                                       std::size_t trace_links = 256) {
    if (!p.is_rational()) throw GeometryError("c_epsilon_candidates requires a rational polygon");
    auto diagonals = enumerate_generalized_diagonals(p, max_links);

    // one candidate per distinct direction, up to reversal
    std::vector<Dir<S>> dirs;
    auto add_dir = [&](const Dir<S>& d) {
        for (const auto& e : dirs)
            if (e == d || e == d.reversed()) return;
        dirs.push_back(d);
    };
    for (const auto& g : diagonals) add_dir(g.direction);

    std::vector<Point<S>> starts;
    for (std::size_t i = 0; i < p.size(); ++i) starts.push_back(p.side(i).midpoint());
    auto [lo, hi] = p.bounding_box();
    using T = ScalarTraits<S>;
    for (long i = 1; i <= 5; ++i)
        for (long j = 1; j <= 5; ++j) {
            Point<S> q{lo.x + (hi.x - lo.x) * T::from_fraction(i, 6),
                       lo.y + (hi.y - lo.y) * T::from_fraction(j, 6)};
            if (p.contains(q) && !p.on_boundary(q)) starts.push_back(q);
        }

    std::vector<CEpsilonCandidate<S>> out;
    for (const auto& d : dirs) {
        // any direction on the same invariant surface may carry the witness
        auto floors = direction_floors(p, d);
        std::optional<CEpsilonCandidate<S>> found;
        for (const auto& f : floors.directions) {
            if (found) break;
            for (const Dir<S>& dd : {f, f.reversed()}) {
                if (found) break;
                for (const auto& q : starts) {
                    Orbit<S> o;
                    try {
                        o = trace(p, PhasePoint<S>{q, dd, {}}, trace_links);
                    } catch (const NumericError&) {
                        continue;
                    }
                    if (!o.periodic) continue;
                    auto rep = epsilon_dense(p, o, epsilon);
                    if (rep.dense) continue;
                    found = CEpsilonCandidate<S>{d, std::move(o), *rep.uncovered_witness};
                    break;
                }
            }
        }
        if (found) out.push_back(std::move(*found));
    }
    return out;
}

}  // namespace billiard
