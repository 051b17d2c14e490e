#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <vector>

#include "billiard/unfold.hpp"

namespace billiard {

/// A maximal open strip of parallel periodic orbits sharing one side word.
/// Offsets are measured as c(x) = cross(translation, x); the open strip is
/// {x : strip_lo < c(x) < strip_hi} in unfolded coordinates.
template <class S>
struct Cylinder {
    std::vector<std::size_t> word;  // canonical (rotation+reversal minimal)
    Dir<S> direction;
    Vec2<S> translation;
    S strip_lo, strip_hi;
    double width = 0;
    PhasePoint<S> representative;
    std::size_t period_links = 0;
    double period_length = 0;
};

namespace detail {

inline std::vector<std::size_t> canonical_cycle(const std::vector<std::size_t>& w) {
    auto best = w;
    auto consider = [&](std::vector<std::size_t> v) {
        for (std::size_t r = 0; r < v.size(); ++r) {
            std::rotate(v.begin(), v.begin() + 1, v.end());
            if (v < best) best = v;
        }
    };
    consider(w);
    consider({w.rbegin(), w.rend()});
    return best;
}

inline bool word_is_primitive(const std::vector<std::size_t>& w) {
    for (std::size_t d = 1; d * 2 <= w.size(); ++d) {
        if (w.size() % d != 0) continue;
        bool rep = true;
        for (std::size_t i = d; i < w.size() && rep; ++i) rep = w[i] == w[i - d];
        if (rep) return false;
    }
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Perpendicular mechanism (orbits meeting a side at a right angle retrace
// themselves and close up).

template <class S>
struct PerpOutcome {
    enum class Kind { Periodic, Singular, Undecided } kind;
    std::optional<Orbit<S>> orbit;          // Periodic: verified full period
    std::size_t half_links = 0;             // links to the second perpendicular hit
    std::vector<Segment<S>> singular_prefix;  // Singular: foot -> vertex
    std::optional<std::size_t> hit_vertex;
};

/// Launches the inward normal from a foot on the open side.
template <class S>
PerpOutcome<S> perpendicular_orbit(const Polygon<S>& p, std::size_t side_index,
                                   const Point<S>& foot, std::size_t max_links) {
    using T = ScalarTraits<S>;
    const Segment<S>& side = p.side(side_index);
    if (p.vertex_at(foot)) throw GeometryError("perpendicular foot at a vertex");
    if (!detail::zero_dist2(point_segment_dist2(foot, side)))
        throw GeometryError("foot does not lie on the side");

    Dir<S> normal{rot90ccw(side.delta())};  // inward for a ccw polygon
    PerpOutcome<S> out;
    out.kind = PerpOutcome<S>::Kind::Undecided;

    PhasePoint<S> cur{foot, normal, std::nullopt};
    std::vector<Segment<S>> prefix;
    for (std::size_t i = 0; i < max_links; ++i) {
        auto r = step(p, cur);
        prefix.emplace_back(cur.q, r.event.hit);
        if (r.event.singular) {
            out.kind = PerpOutcome<S>::Kind::Singular;
            out.singular_prefix = std::move(prefix);
            out.hit_vertex = r.event.vertex_index;
            return out;
        }
        const Segment<S>& hit_side = p.side(r.event.side_index);
        if (T::sign(dot(r.event.incoming.v, hit_side.delta())) == 0) {
            out.half_links = i + 1;
            auto orbit = trace(p, PhasePoint<S>{foot, normal, {}}, 2 * out.half_links + 2);
            if (orbit.periodic && orbit.periodic->first == 2 * out.half_links) {
                out.kind = PerpOutcome<S>::Kind::Periodic;
                out.orbit = std::move(orbit);
            }
            return out;
        }
        cur = std::move(r.next);
    }
    return out;
}

template <class S>
struct PerpScanResult {
    std::size_t side_index = 0;
    // classification of the sampled feet, by side parameter in (0,1)
    std::vector<std::pair<S, typename PerpOutcome<S>::Kind>> samples;
    // maximal runs of consecutive periodic samples, as parameter intervals
    std::vector<std::pair<S, S>> periodic_intervals;
    // exact singular feet found by back-shooting from the vertices
    std::vector<Point<S>> singular_feet;
    std::size_t undecided = 0;
};

/// Exact singular feet on a side: every foot whose perpendicular trajectory
/// reaches a vertex within max_links, found by tracing from each vertex along
/// each floor direction of the perpendicular direction.
template <class S>
std::vector<Point<S>> singular_perpendicular_feet(const Polygon<S>& p,
                                                  std::size_t side_index,
                                                  std::size_t max_links) {
    const Segment<S>& side = p.side(side_index);
    Dir<S> normal{rot90ccw(side.delta())};
    auto floors = direction_floors(p, normal);
    std::vector<Point<S>> feet;
    auto add = [&](const Point<S>& f) {
        for (const auto& g : feet)
            if (g == f) return;
        feet.push_back(f);
    };
    for (std::size_t v = 0; v < p.size(); ++v) {
        for (const auto& d0 : floors.directions) {
            for (const Dir<S>& d : {d0, d0.reversed()}) {
                auto run = trace_between_vertices(p, v, d, max_links);
                // scan the vertex-free prefix for perpendicular bounces on side_index
                const std::vector<Segment<S>>* segs = nullptr;
                const std::vector<std::size_t>* word = nullptr;
                std::vector<Segment<S>> tmp_segs;
                std::vector<std::size_t> tmp_word;
                if (run) {
                    segs = &run->segments;
                    word = &run->word;
                } else {
                    // no vertex hit within budget: the prefix still back-shoots feet
                    if (!detail::inside_wedge(p, v, d.v)) continue;
                    PhasePoint<S> cur{p.vertex(v), d, std::nullopt};
                    for (std::size_t i = 0; i < max_links; ++i) {
                        auto r = step(p, cur);
                        tmp_segs.emplace_back(cur.q, r.event.hit);
                        if (r.event.singular) break;
                        tmp_word.push_back(r.event.side_index);
                        cur = std::move(r.next);
                    }
                    segs = &tmp_segs;
                    word = &tmp_word;
                }
                for (std::size_t j = 0; j < word->size(); ++j) {
                    if ((*word)[j] != side_index) continue;
                    using T = ScalarTraits<S>;
                    if (T::sign(dot((*segs)[j].delta(), side.delta())) != 0) continue;
                    const Point<S>& f = (*segs)[j].b;
                    if (!p.vertex_at(f)) add(f);
                }
            }
        }
    }
    return feet;
}

/// Classifies sampled feet on a side and enumerates the singular feet exactly.
template <class S>
PerpScanResult<S> perp_scan(const Polygon<S>& p, std::size_t side_index,
                            std::size_t max_links, std::size_t samples) {
    if (!p.is_rational()) throw GeometryError("perp_scan requires a rational polygon");
    PerpScanResult<S> out;
    out.side_index = side_index;
    const Segment<S>& side = p.side(side_index);

    std::optional<S> run_start;
    S prev{};
    for (std::size_t j = 1; j <= samples; ++j) {
        S u = ScalarTraits<S>::from_fraction(static_cast<long>(j),
                                             static_cast<long>(samples + 1));
        Point<S> foot{side.a.x + side.delta().x * u, side.a.y + side.delta().y * u};
        auto res = perpendicular_orbit(p, side_index, foot, max_links);
        out.samples.emplace_back(u, res.kind);
        if (res.kind == PerpOutcome<S>::Kind::Undecided) ++out.undecided;
        if (res.kind == PerpOutcome<S>::Kind::Periodic) {
            if (!run_start) run_start = u;
            prev = u;
        } else if (run_start) {
            out.periodic_intervals.emplace_back(*run_start, prev);
            run_start.reset();
        }
    }
    if (run_start) out.periodic_intervals.emplace_back(*run_start, prev);
    out.singular_feet = singular_perpendicular_feet(p, side_index, max_links);
    return out;
}

template <class S>
struct ExceptionalSetReport {
    std::vector<Segment<S>> segments;  // links of perpendicular generalized diagonals
    std::vector<Point<S>> triangle_candidates;  // pairwise intersections (triangles)
    std::size_t samples = 0;
    std::size_t covered = 0;          // samples pierced by a perpendicular periodic orbit
    std::size_t double_covered = 0;   // pierced from two or more sides
};

namespace detail {

template <class S>
std::optional<Point<S>> segment_intersection_point(const Segment<S>& s1,
                                                   const Segment<S>& s2) {
    using T = ScalarTraits<S>;
    Vec2<S> d1 = s1.delta(), d2 = s2.delta();
    S den = cross(d1, d2);
    if (T::sign(den) == 0) return std::nullopt;
    Vec2<S> w = s2.a - s1.a;
    S t = cross(w, d2) / den;
    S u = cross(w, d1) / den;
    auto in01 = [](const S& x) {
        return ScalarTraits<S>::sign(x) >= 0 &&
               ScalarTraits<S>::sign(x - ScalarTraits<S>::from_int(1)) <= 0;
    };
    if (!in01(t) || !in01(u)) return std::nullopt;
    return Point<S>{s1.a.x + d1.x * t, s1.a.y + d1.y * t};
}

}  // namespace detail

/// Theorem-4-style report for convex rational polygons: the segments that can
/// carry the exceptional set, plus sampled coverage by perpendicular periodic
/// orbits. rng01 supplies uniform samples in [0,1).
template <class S>
ExceptionalSetReport<S> exceptional_set_report(const Polygon<S>& p,
                                               std::size_t max_links,
                                               std::size_t samples,
                                               const std::function<double()>& rng01) {
    if (!p.is_convex()) throw GeometryError("exceptional set report requires a convex polygon");
    if (!p.is_rational()) throw GeometryError("exceptional set report requires a rational polygon");
    using T = ScalarTraits<S>;
    ExceptionalSetReport<S> rep;

    // perpendicular generalized diagonals per side direction, grouped per diagonal
    std::vector<std::vector<Segment<S>>> diagonals;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Dir<S> normal{rot90ccw(p.side(i).delta())};
        auto floors = direction_floors(p, normal);
        for (std::size_t v = 0; v < p.size(); ++v)
            for (const auto& d0 : floors.directions)
                for (const Dir<S>& d : {d0, d0.reversed()})
                    if (auto run = trace_between_vertices(p, v, d, max_links)) {
                        diagonals.push_back(run->segments);
                        for (const auto& s : run->segments) rep.segments.push_back(s);
                    }
    }
    if (p.size() == 3) {
        for (std::size_t i = 0; i < diagonals.size(); ++i)
            for (std::size_t j = i + 1; j < diagonals.size(); ++j)
                for (const auto& s1 : diagonals[i])
                    for (const auto& s2 : diagonals[j])
                        if (auto x = detail::segment_intersection_point(s1, s2))
                            rep.triangle_candidates.push_back(*x);
    }

    auto [lo, hi] = p.bounding_box();
    for (std::size_t n = 0; n < samples; ++n) {
        Point<S> q;
        do {
            q = {lo.x + (hi.x - lo.x) * S(rng01()), lo.y + (hi.y - lo.y) * S(rng01())};
        } while (!p.contains(q) || p.on_boundary(q));
        rep.samples++;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Segment<S>& side = p.side(i);
            // project q onto the side line
            Vec2<S> e = side.delta();
            S u = dot(q - side.a, e) / norm2(e);
            if (T::sign(u) <= 0 || T::sign(u - T::from_int(1)) >= 0) continue;
            Point<S> foot{side.a.x + e.x * u, side.a.y + e.y * u};
            if (p.vertex_at(foot) || foot == q) continue;
            auto res = perpendicular_orbit(p, i, foot, max_links);
            if (res.kind == PerpOutcome<S>::Kind::Periodic) ++hits;
        }
        if (hits >= 1) rep.covered++;
        if (hits >= 2) rep.double_covered++;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Holonomy word search: corridors entered through an edge, represented by the
// sector of line directions that keep every crossed edge endpoint on the
// correct side. A word whose reflection composition is a pure translation
// inside the beam yields a cylinder of parallel periodic orbits.

template <class S>
struct WordSearchOptions {
    std::size_t max_word = 16;
    std::optional<std::pair<double, double>> window;  // (theta, delta) radians
    std::size_t node_budget = 1'000'000;
    std::size_t max_cylinders = SIZE_MAX;
};

template <class S>
struct WordSearchStats {
    std::size_t nodes_expanded = 0;
    bool budget_exhausted = false;
};

namespace detail {

template <class S>
struct LineCorridorNode {
    std::vector<std::size_t> word;
    Isometry<S> copy;  // isometry of copy word.size()
    std::vector<Point<S>> left, right;
    Sector<S> beam;    // feasible line directions
};

template <class S>
bool add_separation_constraints(Sector<S>& beam, const std::vector<Point<S>>& left,
                                const std::vector<Point<S>>& right,
                                const Point<S>& l_new, const Point<S>& r_new) {
    using T = ScalarTraits<S>;
    auto constrain = [&](const Point<S>& l, const Point<S>& r) {
        Vec2<S> x = l - r;
        if (T::sign(x.x) == 0 && T::sign(x.y) == 0) {
            beam.empty = true;
            return;
        }
        beam = beam.intersect(Sector<S>{-x, x, false});
    };
    constrain(l_new, r_new);
    for (const auto& r : right) {
        if (beam.empty) return false;
        constrain(l_new, r);
    }
    for (const auto& l : left) {
        if (beam.empty) return false;
        constrain(l, r_new);
    }
    return !beam.empty;
}

}  // namespace detail

/// Builds the cylinder for a translation word at a node; the representative is
/// the mid-strip phase point just after the bounce at word[0].
template <class S>
std::optional<Cylinder<S>> make_cylinder(const Polygon<S>& p,
                                         const std::vector<std::size_t>& word,
                                         const Vec2<S>& translation,
                                         const std::vector<Point<S>>& left,
                                         const std::vector<Point<S>>& right) {
    using T = ScalarTraits<S>;
    Cylinder<S> cyl;
    cyl.word = word;
    cyl.translation = translation;
    cyl.direction = Dir<S>{translation};
    bool first = true;
    for (const auto& l : left) {
        S c = cross(translation, l);
        if (first || T::sign(c - cyl.strip_hi) < 0) cyl.strip_hi = c;
        first = false;
    }
    first = true;
    for (const auto& r : right) {
        S c = cross(translation, r);
        if (first || T::sign(c - cyl.strip_lo) > 0) cyl.strip_lo = c;
        first = false;
    }
    S gap = cyl.strip_hi - cyl.strip_lo;
    if (T::sign(gap) <= 0) return std::nullopt;
    double tn = norm(translation);
    cyl.width = to_double(gap) / tn;
    cyl.period_links = word.size();
    cyl.period_length = tn;

    // representative: intersect the mid-strip line with the entry side
    S mid = (cyl.strip_lo + cyl.strip_hi) / T::from_int(2);
    const Segment<S>& entry = p.side(word.front());
    S den = cross(translation, entry.delta());
    if (T::sign(den) == 0) return std::nullopt;
    S u = (mid - cross(translation, entry.a)) / den;
    if (T::sign(u) <= 0 || T::sign(u - T::from_int(1)) >= 0) return std::nullopt;
    Point<S> q{entry.a.x + entry.delta().x * u, entry.a.y + entry.delta().y * u};
    cyl.representative = {q, reflect_direction(cyl.direction, entry), std::nullopt};
    return cyl;
}

/// Re-verifies a cylinder by tracing its representative for one period.
template <class S>
bool verify_cylinder(const Polygon<S>& p, const Cylinder<S>& cyl) {
    Orbit<S> o;
    try {
        o = trace(p, cyl.representative, cyl.period_links + 2);
    } catch (const NumericError&) {
        return false;
    }
    if (!o.periodic || o.periodic->first != cyl.period_links) return false;
    auto w = o.word(0, cyl.period_links);
    return detail::canonical_cycle(w) == detail::canonical_cycle(cyl.word);
}

/// Breadth-first search over feasible line corridors for translation words.
/// Every returned cylinder is verified by tracing its representative.
template <class S>
std::vector<Cylinder<S>> word_search(const Polygon<S>& p, const WordSearchOptions<S>& opt,
                                     WordSearchStats<S>* stats = nullptr) {
    if (!p.is_rational()) throw GeometryError("word_search requires a rational polygon");
    if (opt.max_word < 2) throw GeometryError("max_word must be >= 2");
    using Node = detail::LineCorridorNode<S>;

    Sector<S> window_sector;
    bool have_window = false;
    if (opt.window) {
        auto [theta, delta] = *opt.window;
        if (delta < M_PI / 2) {
            window_sector = Sector<S>{dir_from_angle<S>(theta - delta).v,
                                      dir_from_angle<S>(theta + delta).v, false};
            have_window = true;
        }
    }

    std::deque<Node> queue;
    for (std::size_t s = 0; s < p.size(); ++s) {
        const Segment<S>& e = p.side(s);
        for (int orient = 0; orient < 2; ++orient) {
            Node n;
            n.word = {s};
            n.copy = reflect_across_line(e);
            Point<S> l = orient ? e.a : e.b;
            Point<S> r = orient ? e.b : e.a;
            n.beam = Sector<S>{-(l - r), l - r, false};
            if (have_window) n.beam = n.beam.intersect(window_sector);
            if (n.beam.empty) continue;
            n.left = {l};
            n.right = {r};
            queue.push_back(std::move(n));
        }
    }

    std::vector<Cylinder<S>> out;
    std::map<std::vector<std::size_t>, bool> seen;
    std::size_t expanded = 0;
    bool exhausted = false;

    while (!queue.empty()) {
        if (expanded >= opt.node_budget) {
            exhausted = true;
            break;
        }
        if (out.size() >= opt.max_cylinders) break;
        Node n = std::move(queue.front());
        queue.pop_front();
        ++expanded;

        // translation word?
        if (n.word.size() >= 2 && n.copy.linear_is_identity()) {
            const Vec2<S>& t = n.copy.t;
            if (n.beam.contains(t) && detail::word_is_primitive(n.word)) {
                auto canon = detail::canonical_cycle(n.word);
                if (!seen.count(canon)) {
                    seen[canon] = true;
                    if (auto cyl = make_cylinder(p, n.word, t, n.left, n.right)) {
                        cyl->word = canon;
                        if (verify_cylinder(p, *cyl)) out.push_back(std::move(*cyl));
                    }
                }
            }
        }

        if (n.word.size() >= opt.max_word) continue;
        for (std::size_t s = 0; s < p.size(); ++s) {
            if (s == n.word.back()) continue;
            Segment<S> img = n.copy.apply(p.side(s));
            for (int orient = 0; orient < 2; ++orient) {
                Node child;
                child.beam = n.beam;
                Point<S> l = orient ? img.a : img.b;
                Point<S> r = orient ? img.b : img.a;
                if (!detail::add_separation_constraints(child.beam, n.left, n.right, l, r))
                    continue;
                child.word = n.word;
                child.word.push_back(s);
                child.copy = n.copy.compose(reflect_across_line(p.side(s)));
                child.left = n.left;
                child.left.push_back(l);
                child.right = n.right;
                child.right.push_back(r);
                queue.push_back(std::move(child));
            }
        }
    }
    if (stats) {
        stats->nodes_expanded = expanded;
        stats->budget_exhausted = exhausted;
    }
    return out;
}

// ---------------------------------------------------------------------------

/// Extracts the maximal open strip of the cylinder through a periodic orbit.
template <class S>
Cylinder<S> periodic_strip(const Polygon<S>& p, const Orbit<S>& o) {
    if (!o.periodic) throw GeometryError("periodic_strip requires a periodic orbit");
    std::size_t base = o.start_on_boundary ? 0 : 1;
    std::size_t k = o.periodic->first;
    auto word = o.word(base, k);

    auto m = Isometry<S>::identity();
    std::vector<Point<S>> left, right;
    using T = ScalarTraits<S>;
    auto h = detail::word_holonomy(p, word);
    if (!h.linear_is_identity())
        throw GeometryError("periodic orbit word does not compose to a translation");
    const Vec2<S>& t = h.t;
    for (std::size_t side : word) {
        Segment<S> img = m.apply(p.side(side));
        S ca = cross(t, img.a), cb = cross(t, img.b);
        if (T::sign(ca - cb) >= 0) {
            left.push_back(img.a);
            right.push_back(img.b);
        } else {
            left.push_back(img.b);
            right.push_back(img.a);
        }
        m = m.compose(reflect_across_line(p.side(side)));
    }
    auto cyl = make_cylinder(p, word, t, left, right);
    if (!cyl) throw GeometryError("degenerate strip (singular periodic orbit)");
    cyl->representative = base == 0 ? o.start
                                    : PhasePoint<S>{o.events[0].hit, o.events[0].outgoing,
                                                    std::nullopt};
    cyl->word = detail::canonical_cycle(word);
    return *cyl;
}

/// True when q lies on the folded cylinder: launched in the cylinder's
/// direction it is periodic with the same period and side word. (The strip
/// offsets describe only the copy-0 band of the unfolded corridor; the folded
/// cylinder meets the table through every copy.)
template <class S>
bool cylinder_contains(const Polygon<S>& p, const Cylinder<S>& cyl, const Point<S>& q) {
    using T = ScalarTraits<S>;
    if (!p.contains(q)) return false;
    Dir<S> d = cyl.direction;
    if (p.on_boundary(q)) {
        if (p.vertex_at(q)) return false;  // vertices are singular
        // On a side, the translation direction may point outward; the folded
        // cylinder continues with the reflected direction.
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto& side = p.side(i);
            if (T::sign(point_segment_dist2(q, side)) != 0) continue;
            if (T::sign(cross(side.delta(), d.v)) < 0) d = reflect_direction(d, side);
            break;
        }
    }
    try {
        auto o = trace(p, PhasePoint<S>{q, d, {}}, cyl.period_links + 2);
        if (!o.periodic || o.periodic->first != cyl.period_links) return false;
        std::size_t base = o.start_on_boundary ? 0 : 1;
        return detail::canonical_cycle(o.word(base, cyl.period_links)) == cyl.word;
    } catch (const NumericError&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// The L-shape family: three unit squares; for every k >= 1 there is a periodic
// orbit with 2k+2 links that never enters the open right-hand square.

template <class S>
Polygon<S> lshape_polygon() {
    auto pt = [](long x, long y) {
        return Point<S>{ScalarTraits<S>::from_int(x), ScalarTraits<S>::from_int(y)};
    };
    return Polygon<S>::build({pt(0, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2)});
}

/// The k-th family member: slope 2k relative to the one-square-wide left
/// column, launched from the midpoint of the inner vertical side. The foot
/// follows from the unfolded translation closure of the column: the unfolded
/// line advances one column width while climbing 2k, so the single inner-wall
/// contact sits at mid-height of the inner side for every k.
template <class S>
std::pair<Polygon<S>, Orbit<S>> lshape_orbit(std::size_t k) {
    if (k < 1) throw GeometryError("k must be >= 1");
    Polygon<S> p = lshape_polygon<S>();
    // inner vertical side (1,1)-(1,2) is side 3 of the ccw vertex list
    Point<S> start = p.side(3).midpoint();
    Dir<S> d{ScalarTraits<S>::from_int(-1), ScalarTraits<S>::from_int(2 * k)};
    auto o = trace(p, PhasePoint<S>{start, d, {}}, 2 * k + 4);
    return {std::move(p), std::move(o)};
}

}  // namespace billiard
