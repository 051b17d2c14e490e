#pragma once

#include <optional>
#include <vector>

#include "billiard/polygon.hpp"

namespace billiard {

template <class S>
struct PhasePoint {
    Point<S> q;
    Dir<S> v;
    std::optional<std::size_t> floor_index;

    bool same_state(const PhasePoint& o) const { return q == o.q && v == o.v; }
};

template <class S>
struct BounceEvent {
    Point<S> hit;
    std::size_t side_index = 0;
    Dir<S> incoming, outgoing;
    bool singular = false;
    std::optional<std::size_t> vertex_index;
    // sides reflected at this event in order; one entry for a regular bounce,
    // possibly several for a corner continuation
    std::vector<std::size_t> reflected_sides;
};

template <class S>
struct Orbit {
    PhasePoint<S> start;
    bool start_on_boundary = false;
    std::vector<BounceEvent<S>> events;
    std::vector<Segment<S>> links;
    double geometric_length = 0;
    std::optional<std::pair<std::size_t, double>> periodic;  // (links, length)

    /// Side word over a window of events, corner reflections included.
    std::vector<std::size_t> word(std::size_t first, std::size_t count) const {
        std::vector<std::size_t> w;
        for (std::size_t i = first; i < first + count; ++i)
            for (std::size_t s : events[i].reflected_sides) w.push_back(s);
        return w;
    }
};

// ---------------------------------------------------------------------------
// Corner continuation by the left-continuity rule: the limit of trajectories
// hitting the boundary just before the vertex in ccw order. Such trajectories
// reflect first in the side ending at the vertex, then alternate with the side
// starting there until the direction escapes into the interior wedge.

namespace detail {

/// d strictly inside the interior wedge at vertex i (possibly reflex).
template <class S>
bool inside_wedge(const Polygon<S>& p, std::size_t vi, const Vec2<S>& d) {
    using T = ScalarTraits<S>;
    std::size_t n = p.size();
    Vec2<S> b = p.vertex((vi + 1) % n) - p.vertex(vi);       // along outgoing side
    Vec2<S> a = p.vertex((vi + n - 1) % n) - p.vertex(vi);   // along incoming side
    int w = T::sign(cross(b, a));
    if (w > 0) return T::sign(cross(b, d)) > 0 && T::sign(cross(d, a)) > 0;
    if (w == 0) return T::sign(cross(b, d)) > 0;  // straight angle
    // reflex wedge: complement of the closed sector from a ccw to b
    return !(T::sign(cross(a, d)) >= 0 && T::sign(cross(d, b)) >= 0);
}

}  // namespace detail

/// Outgoing direction and reflected-side list for a singular hit at vertex vi.
template <class S>
std::pair<Dir<S>, std::vector<std::size_t>> corner_continuation(const Polygon<S>& p,
                                                                std::size_t vi,
                                                                const Dir<S>& incoming) {
    std::size_t s_prev = p.side_ending_at(vi);
    std::size_t s_next = p.side_starting_at(vi);
    Dir<S> d = incoming;
    std::vector<std::size_t> word;
    for (int k = 0; k < 1000; ++k) {
        std::size_t side = (k % 2 == 0) ? s_prev : s_next;
        d = reflect_direction(d, p.side(side));
        word.push_back(side);
        if (detail::inside_wedge(p, vi, d.v)) return {d, word};
    }
    throw NumericError("corner continuation did not escape (grazing trajectory)");
}

// ---------------------------------------------------------------------------

template <class S>
struct StepResult {
    BounceEvent<S> event;
    PhasePoint<S> next;
};

/// One bounce: advance along the ray to the nearest boundary hit and reflect.
template <class S>
StepResult<S> step(const Polygon<S>& p, const PhasePoint<S>& s,
                   const FloorSet<S>* floors = nullptr) {
    using T = ScalarTraits<S>;
    std::optional<RayHit<S>> best;
    std::size_t best_side = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto h = ray_segment_intersection(s.q, s.v, p.side(i));
        if (!h) continue;
        if (!best || T::sign(h->t - best->t) < 0) {
            best = h;
            best_side = i;
        }
    }
    if (!best)
        throw NumericError("billiard ray found no boundary hit (escaped polygon)");

    BounceEvent<S> ev;
    ev.hit = best->point;
    ev.incoming = s.v;
    auto vi = p.vertex_at(best->point);
    if (vi) {
        ev.singular = true;
        ev.vertex_index = *vi;
        ev.side_index = p.side_ending_at(*vi);
        ev.hit = p.vertex(*vi);
        auto [out, word] = corner_continuation(p, *vi, s.v);
        ev.outgoing = out;
        ev.reflected_sides = std::move(word);
    } else {
        ev.side_index = best_side;
        ev.outgoing = reflect_direction(s.v, p.side(best_side));
        ev.reflected_sides = {best_side};
    }

    PhasePoint<S> next{ev.hit, ev.outgoing, std::nullopt};
    if (floors) next.floor_index = floors->index_of(ev.outgoing);
    return {std::move(ev), std::move(next)};
}

// ---------------------------------------------------------------------------
// Period detection.

/// Near-return thresholds for float-backend period candidates; every candidate
/// is verified through the holonomy of its side word.
inline constexpr double kReturnPosTol = 1e-6;
inline constexpr double kReturnDirTol = 1e-6;

namespace detail {

template <class S>
Isometry<S> word_holonomy(const Polygon<S>& p, const std::vector<std::size_t>& word) {
    auto m = Isometry<S>::identity();
    for (std::size_t side : word) m = m.compose(reflect_across_line(p.side(side)));
    return m;
}

/// Holonomy test: identity linear part, translation parallel to the direction.
template <class S>
bool verify_period_holonomy(const Polygon<S>& p, const std::vector<std::size_t>& word,
                            const Dir<S>& v) {
    auto h = word_holonomy(p, word);
    if (!h.linear_is_identity()) return false;
    return ScalarTraits<S>::sign(cross(h.t, v.v)) == 0 &&
           ScalarTraits<S>::sign(dot(h.t, v.v)) > 0;
}

template <class S>
bool states_near(const PhasePoint<S>& a, const PhasePoint<S>& b) {
    if constexpr (ScalarTraits<S>::exact) {
        return a.same_state(b);
    } else {
        if (norm(a.q - b.q) > kReturnPosTol) return false;
        return angular_distance(a.v.angle(), b.v.angle()) <= kReturnDirTol;
    }
}

}  // namespace detail

/// Smallest period of a traced orbit, or nullopt. Exact backend: exact state
/// equality. Float backend: near-return candidates verified by holonomy.
template <class S>
std::optional<std::pair<std::size_t, double>> detect_period(const Polygon<S>& p,
                                                            const Orbit<S>& o) {
    if (o.events.empty()) return std::nullopt;
    // reference state: the start itself when it sits on the boundary,
    // otherwise the first bounce state
    std::size_t base;  // index into links of the first link of the window
    PhasePoint<S> ref;
    if (o.start_on_boundary) {
        base = 0;
        ref = o.start;
    } else {
        base = 1;
        ref = {o.events[0].hit, o.events[0].outgoing, std::nullopt};
    }
    for (std::size_t k = 1; base + k <= o.events.size(); ++k) {
        const auto& e = o.events[base + k - 1];
        PhasePoint<S> after{e.hit, e.outgoing, std::nullopt};
        if (!detail::states_near(after, ref)) continue;
        if constexpr (!ScalarTraits<S>::exact) {
            if (!detail::verify_period_holonomy(p, o.word(base == 0 ? 0 : 1, k), ref.v))
                continue;
        }
        double len = 0;
        for (std::size_t i = base; i < base + k; ++i) len += o.links[i].length();
        return std::make_pair(k, len);
    }
    return std::nullopt;
}

/// Iterates step up to max_links bounces; stops early on detected periodicity.
template <class S>
Orbit<S> trace(const Polygon<S>& p, const PhasePoint<S>& start, std::size_t max_links,
               const FloorSet<S>* floors = nullptr, bool detect = true) {
    if (max_links < 1) throw GeometryError("max_links must be >= 1");
    Orbit<S> o;
    o.start = start;
    if (floors) o.start.floor_index = floors->index_of(start.v);
    o.start_on_boundary = p.on_boundary(start.q);
    if (!p.contains(start.q)) throw GeometryError("start point outside the polygon");

    PhasePoint<S> cur = o.start;
    for (std::size_t i = 0; i < max_links; ++i) {
        auto r = step(p, cur, floors);
        if (!(cur.q == r.event.hit))
            o.links.emplace_back(cur.q, r.event.hit);
        else
            throw NumericError("zero-length link");
        o.geometric_length += o.links.back().length();
        o.events.push_back(std::move(r.event));
        cur = std::move(r.next);
        if (detect) {
            if (auto per = detect_period(p, o)) {
                o.periodic = per;
                break;
            }
        }
    }
    return o;
}

template <class S>
Orbit<S> trace(const Polygon<S>& p, const PhasePoint<S>& start, std::size_t max_links,
               std::nullptr_t, bool detect) {
    return trace(p, start, max_links, static_cast<const FloorSet<S>*>(nullptr), detect);
}

// ---------------------------------------------------------------------------

template <class S>
struct VertexRun {
    std::size_t start_vertex = 0, end_vertex = 0;
    std::size_t links = 0;
    std::vector<Segment<S>> segments;
    std::vector<std::size_t> word;  // sides reflected strictly between the vertices
};

/// Trace from a vertex into the interior until another (or the same) vertex is
/// hit; nullopt when no vertex hit occurs within max_links.
template <class S>
std::optional<VertexRun<S>> trace_between_vertices(const Polygon<S>& p,
                                                   std::size_t start_vertex,
                                                   const Dir<S>& d,
                                                   std::size_t max_links) {
    if (!detail::inside_wedge(p, start_vertex, d.v)) return std::nullopt;
    VertexRun<S> run;
    run.start_vertex = start_vertex;
    PhasePoint<S> cur{p.vertex(start_vertex), d, std::nullopt};
    for (std::size_t i = 0; i < max_links; ++i) {
        auto r = step(p, cur);
        run.segments.emplace_back(cur.q, r.event.hit);
        ++run.links;
        if (r.event.singular) {
            run.end_vertex = *r.event.vertex_index;
            return run;
        }
        run.word.push_back(r.event.side_index);
        cur = std::move(r.next);
    }
    return std::nullopt;
}

}  // namespace billiard
