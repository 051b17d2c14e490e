#pragma once

#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "billiard/flow.hpp"

namespace billiard {

/// A chain of unfolded polygon copies. copies[0] is the identity and
/// copies[k+1] = copies[k] composed with the reflection across side word[k].
template <class S>
struct Corridor {
    std::vector<std::size_t> word;
    std::vector<Isometry<S>> copies;

    static Corridor base() { return {{}, {Isometry<S>::identity()}}; }

    void extend(const Polygon<S>& p, std::size_t side) {
        copies.push_back(copies.back().compose(reflect_across_line(p.side(side))));
        word.push_back(side);
    }
};

template <class S>
struct Unfolding {
    Corridor<S> corridor;
    Segment<S> segment;                    // straight unfolded trajectory
    std::vector<Segment<S>> unfolded_links;  // link j mapped into its copy
};

/// Unfolds the first n links of the trajectory of s: reflections of the
/// trajectory become reflections of the polygon and the links line up.
template <class S>
Unfolding<S> unfold(const Polygon<S>& p, const PhasePoint<S>& s, std::size_t n) {
    auto orbit = trace(p, s, n, static_cast<const FloorSet<S>*>(nullptr), false);
    Unfolding<S> u;
    u.corridor = Corridor<S>::base();
    for (std::size_t j = 0; j < orbit.links.size(); ++j) {
        u.unfolded_links.push_back(u.corridor.copies.back().apply(orbit.links[j]));
        if (j + 1 < orbit.links.size())
            for (std::size_t side : orbit.events[j].reflected_sides)
                u.corridor.extend(p, side);
    }
    u.segment = Segment<S>(u.unfolded_links.front().a, u.unfolded_links.back().b);
    return u;
}

// ---------------------------------------------------------------------------
// Vertex-apexed corridor enumeration.
//
// A node carries the open angular beam of directions from the apex that cross
// every unfolded edge of the word in order. Expansion partitions the beam by
// an exact angular sweep over the current copy's sides, so occlusion in
// non-convex copies is handled; beam-empty branches are never produced.

template <class S>
struct VertexCorridorNode {
    std::vector<std::size_t> word;
    Isometry<S> copy;   // isometry of copy word.size()
    Sector<S> beam;     // feasible directions from the apex
    std::size_t entry_side = 0;  // base side index crossed last (depth > 0)
};

template <class S>
struct GeneralizedDiagonal {
    std::size_t start_vertex = 0;
    std::size_t end_vertex = 0;       // base index of the final vertex
    std::size_t end_copy = 0;         // copy index carrying the final vertex
    std::size_t link_count = 0;
    Dir<S> direction;
    Segment<S> unfolded_segment;
    std::vector<std::size_t> word;
};

namespace detail {

template <class S>
struct SweepPiece {
    Sector<S> sector;
    std::size_t side;  // base side index owning the piece
};

// Partition the beam into maximal pieces, each owned by the side first crossed
// by rays from the apex. Edges incident to the apex or collinear with it are
// never owners.
template <class S>
std::vector<SweepPiece<S>> sweep_partition(const Polygon<S>& p, const Point<S>& apex,
                                           const VertexCorridorNode<S>& node) {
    using T = ScalarTraits<S>;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!node.word.empty() && i == node.entry_side) continue;
        candidates.push_back(i);
    }
    std::vector<Vec2<S>> events{node.beam.u, node.beam.w};
    for (std::size_t i : candidates) {
        Segment<S> img = node.copy.apply(p.side(i));
        for (const Point<S>& e : {img.a, img.b}) {
            Vec2<S> d = e - apex;
            if (T::sign(d.x) == 0 && T::sign(d.y) == 0) continue;
            if (node.beam.contains(d)) events.push_back(d);
        }
    }
    // ccw order from beam.u; all events lie in the closed beam (span <= pi)
    const Vec2<S> u0 = node.beam.u;
    std::sort(events.begin(), events.end(), [&](const Vec2<S>& a, const Vec2<S>& b) {
        int c = T::sign(cross(a, b));
        if (c != 0) return c > 0;
        return false;
    });
    events.erase(std::unique(events.begin(), events.end(),
                             [&](const Vec2<S>& a, const Vec2<S>& b) {
                                 return T::sign(cross(a, b)) == 0 &&
                                        T::sign(dot(a, b)) > 0;
                             }),
                 events.end());
    (void)u0;

    std::vector<SweepPiece<S>> pieces;
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        Sector<S> piece{events[i], events[i + 1], false};
        int c = T::sign(cross(piece.u, piece.w));
        if (c < 0) continue;
        if (c == 0 && T::sign(dot(piece.u, piece.w)) > 0) continue;  // zero width
        Dir<S> probe{piece.sample()};
        std::optional<S> best_t;
        std::size_t best_side = 0;
        for (std::size_t s : candidates) {
            auto h = ray_segment_intersection(apex, probe, node.copy.apply(p.side(s)));
            if (!h) continue;
            if (!best_t || T::sign(h->t - *best_t) < 0) {
                best_t = h->t;
                best_side = s;
            }
        }
        if (!best_t) continue;  // probe leaves the corridor: infeasible piece
        if (!pieces.empty() && pieces.back().side == best_side &&
            pieces.back().sector.w == piece.u) {
            pieces.back().sector.w = piece.w;  // merge adjacent pieces, same owner
        } else {
            pieces.push_back({piece, best_side});
        }
    }
    return pieces;
}

// Interior wedge at a vertex as up to two sectors of span <= pi, plus the
// split rays introduced for reflex wedges (checked separately for diagonals).
template <class S>
std::pair<std::vector<Sector<S>>, std::vector<Vec2<S>>> wedge_sectors(
    const Polygon<S>& p, std::size_t vi) {
    using T = ScalarTraits<S>;
    std::size_t n = p.size();
    Vec2<S> b = p.vertex((vi + 1) % n) - p.vertex(vi);
    Vec2<S> a = p.vertex((vi + n - 1) % n) - p.vertex(vi);
    int w = T::sign(cross(b, a));
    if (w > 0) return {{Sector<S>{b, a, false}}, {}};
    if (w == 0) return {{Sector<S>{b, a, false}}, {}};  // straight angle, span pi
    // reflex: split at -b
    return {{Sector<S>{b, -b, false}, Sector<S>{-b, a, false}}, {-b}};
}

}  // namespace detail

/// Depth-first enumeration of feasible vertex-apexed corridors of word length
/// <= max_len. The visitor sees every node of depth >= 1; returning false
/// prunes the subtree. Returns the number of nodes expanded.
template <class S>
std::size_t enumerate_vertex_corridors(
    const Polygon<S>& p, std::size_t from_vertex, std::size_t max_len,
    const std::function<bool(const VertexCorridorNode<S>&)>& visit) {
    const Point<S>& apex = p.vertex(from_vertex);
    auto [roots, splits] = detail::wedge_sectors(p, from_vertex);
    std::size_t expanded = 0;

    std::function<void(const VertexCorridorNode<S>&)> dfs =
        [&](const VertexCorridorNode<S>& node) {
            ++expanded;
            if (node.word.size() >= max_len) return;
            for (auto& piece : detail::sweep_partition(p, apex, node)) {
                VertexCorridorNode<S> child;
                child.word = node.word;
                child.word.push_back(piece.side);
                child.copy = node.copy.compose(reflect_across_line(p.side(piece.side)));
                child.beam = piece.sector;
                child.entry_side = piece.side;
                if (visit(child)) dfs(child);
            }
        };

    for (const auto& root_sector : roots) {
        VertexCorridorNode<S> root;
        root.copy = Isometry<S>::identity();
        root.beam = root_sector;
        dfs(root);
    }
    return expanded;
}

/// Corridors (word + copies) of word length <= max_len apexed at a vertex.
template <class S>
std::vector<Corridor<S>> enumerate_corridors(const Polygon<S>& p,
                                             std::size_t from_vertex,
                                             std::size_t max_len) {
    if (from_vertex >= p.size()) throw GeometryError("bad vertex index");
    std::vector<Corridor<S>> out;
    enumerate_vertex_corridors<S>(
        p, from_vertex, max_len, [&](const VertexCorridorNode<S>& n) {
            Corridor<S> c = Corridor<S>::base();
            for (std::size_t s : n.word) c.extend(p, s);
            out.push_back(std::move(c));
            return true;
        });
    return out;
}

// ---------------------------------------------------------------------------

namespace detail {

template <class S>
using DiagonalKey = std::tuple<std::size_t, std::vector<std::size_t>, std::size_t>;

template <class S>
DiagonalKey<S> canonical_diagonal_key(std::size_t sv, const std::vector<std::size_t>& word,
                                      std::size_t ev) {
    std::vector<std::size_t> rev(word.rbegin(), word.rend());
    DiagonalKey<S> fwd{sv, word, ev};
    DiagonalKey<S> bwd{ev, rev, sv};
    return std::min(fwd, bwd);
}

template <class S>
GeneralizedDiagonal<S> diagonal_from_run(const Polygon<S>& p, const VertexRun<S>& run) {
    GeneralizedDiagonal<S> d;
    d.start_vertex = run.start_vertex;
    d.end_vertex = run.end_vertex;
    d.link_count = run.links;
    d.word = run.word;
    auto m = Isometry<S>::identity();
    for (std::size_t s : run.word) m = m.compose(reflect_across_line(p.side(s)));
    d.end_copy = run.word.size();
    Point<S> end = m.apply(p.vertex(run.end_vertex));
    d.unfolded_segment = Segment<S>(p.vertex(run.start_vertex), end);
    d.direction = Dir<S>{d.unfolded_segment.delta()};
    return d;
}

}  // namespace detail

/// All generalized diagonals with link_count <= max_links, deduplicated up to
/// reversal. Polygon sides themselves do not count as diagonals.
template <class S>
std::vector<GeneralizedDiagonal<S>> enumerate_generalized_diagonals(
    const Polygon<S>& p, std::size_t max_links) {
    std::set<detail::DiagonalKey<S>> seen;
    std::vector<GeneralizedDiagonal<S>> out;
    auto emit = [&](GeneralizedDiagonal<S> d) {
        auto key = detail::canonical_diagonal_key<S>(d.start_vertex, d.word, d.end_vertex);
        if (seen.insert(key).second) out.push_back(std::move(d));
    };
    if (max_links < 1) return out;

    for (std::size_t v = 0; v < p.size(); ++v) {
        const Point<S>& apex = p.vertex(v);
        auto check_node = [&](const VertexCorridorNode<S>& node) {
            using T = ScalarTraits<S>;
            for (std::size_t j = 0; j < p.size(); ++j) {
                Point<S> img = node.copy.apply(p.vertex(j));
                Vec2<S> d = img - apex;
                if (T::sign(d.x) == 0 && T::sign(d.y) == 0) continue;
                if (!node.beam.contains(d)) continue;
                // the segment must reach the vertex before leaving the copy
                Dir<S> dir{d};
                bool blocked = false;
                for (std::size_t s = 0; s < p.size(); ++s) {
                    if (!node.word.empty() && s == node.entry_side) continue;
                    auto h = ray_segment_intersection(apex, dir, node.copy.apply(p.side(s)));
                    if (h && T::sign(norm2(h->point - apex) - norm2(d)) < 0) {
                        blocked = true;
                        break;
                    }
                }
                if (blocked) continue;
                GeneralizedDiagonal<S> g;
                g.start_vertex = v;
                g.end_vertex = j;
                g.end_copy = node.word.size();
                g.link_count = node.word.size() + 1;
                g.word = node.word;
                g.unfolded_segment = Segment<S>(apex, img);
                g.direction = dir;
                emit(std::move(g));
            }
        };

        // depth 0 node(s) are visited explicitly, children via the visitor
        auto [roots, splits] = detail::wedge_sectors(p, v);
        for (const auto& rs : roots) {
            VertexCorridorNode<S> root;
            root.copy = Isometry<S>::identity();
            root.beam = rs;
            check_node(root);
        }
        enumerate_vertex_corridors<S>(p, v, max_links - 1,
                                      [&](const VertexCorridorNode<S>& n) {
                                          check_node(n);
                                          return true;
                                      });
        // reflex wedges are split; diagonals on the split rays are found by
        // tracing those rays directly
        for (const auto& ray : splits) {
            if (auto run = trace_between_vertices(p, v, Dir<S>{ray}, max_links))
                emit(detail::diagonal_from_run(p, *run));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const GeneralizedDiagonal<S>& a, const GeneralizedDiagonal<S>& b) {
                  return std::tuple(a.link_count, a.start_vertex, a.word) <
                         std::tuple(b.link_count, b.start_vertex, b.word);
              });
    return out;
}

// ---------------------------------------------------------------------------

/// Angular separation delta such that any direction within delta of theta has
/// an invariant surface free of generalized diagonals of length <= 2N.
/// Returns pi when no such diagonal exists at all.
template <class S>
double delta_N(const Polygon<S>& p, const Dir<S>& theta, std::size_t N) {
    auto diagonals = enumerate_generalized_diagonals(p, 2 * N);
    auto group = floor_group(p);
    double ta = theta.angle();
    double delta = M_PI;
    for (const auto& d : diagonals)
        for (const auto& g : group)
            delta = std::min(delta, angular_distance(g.apply(d.direction).angle(), ta));
    double floor_eps = ScalarTraits<S>::exact ? 0.0 : float_tolerance();
    if (delta <= floor_eps)
        throw GeometryError("theta carries a generalized diagonal of length <= 2N");
    return delta;
}

// ---------------------------------------------------------------------------

template <class S>
struct BranchReport {
    std::size_t j_fwd = 0, j_bwd = 0;
    std::optional<std::size_t> vertex_fwd, vertex_bwd;  // base vertex indices
    std::optional<Point<S>> branch_point_fwd, branch_point_bwd;  // unfolded A, B
    std::optional<GeneralizedDiagonal<S>> diagonal;
    // set when AB passes exactly through another vertex image: AB is then a
    // chain of shorter diagonals rather than a single one (non-generic case)
    bool degenerate_chain = false;
    std::optional<Point<S>> chain_vertex;  // the intermediate image, unfolded
};

namespace detail {

// Forward corridor word of N-1 crossings (N copies); nullopt on singular hits.
template <class S>
std::optional<std::vector<std::size_t>> corridor_word(const Polygon<S>& p,
                                                      const PhasePoint<S>& s,
                                                      std::size_t n_copies) {
    if (n_copies < 2) return std::vector<std::size_t>{};
    auto o = trace(p, s, n_copies - 1, static_cast<const FloorSet<S>*>(nullptr), false);
    std::vector<std::size_t> w;
    for (const auto& e : o.events) {
        if (e.singular) return std::nullopt;
        w.push_back(e.side_index);
    }
    return w;
}

}  // namespace detail

/// Compares the corridors of (q0,theta) and (q0,theta') in both time
/// directions; where both branch before N copies, the segment joining the two
/// branching vertices is certified as a generalized diagonal.
template <class S>
BranchReport<S> corridor_coincidence(const Polygon<S>& p, const Point<S>& q0,
                                     const Dir<S>& theta, const Dir<S>& theta_prime,
                                     std::size_t N) {
    BranchReport<S> rep;
    auto analyze = [&](const Dir<S>& d1, const Dir<S>& d2, std::size_t& j,
                       std::optional<std::size_t>& vert, std::optional<Point<S>>& bp) {
        auto w1 = detail::corridor_word(p, PhasePoint<S>{q0, d1, {}}, N);
        auto w2 = detail::corridor_word(p, PhasePoint<S>{q0, d2, {}}, N);
        j = 1;  // copy 0 always coincides
        if (!w1 || !w2) return;
        std::size_t k = 0;
        while (k < w1->size() && k < w2->size() && (*w1)[k] == (*w2)[k]) ++k;
        j = std::min<std::size_t>(N, 1 + k);
        if (j >= N) return;  // no branching within N
        std::size_t s1 = (*w1)[k], s2 = (*w2)[k];
        // common vertex of the two branching sides
        std::optional<std::size_t> shared;
        for (std::size_t a : {s1, (s1 + 1) % p.size()})
            for (std::size_t b : {s2, (s2 + 1) % p.size()})
                if (a == b) shared = a;
        if (!shared) return;
        auto m = Isometry<S>::identity();
        for (std::size_t i = 0; i < k; ++i)
            m = m.compose(reflect_across_line(p.side((*w1)[i])));
        vert = shared;
        bp = m.apply(p.vertex(*shared));
    };

    analyze(theta, theta_prime, rep.j_fwd, rep.vertex_fwd, rep.branch_point_fwd);
    analyze(theta.reversed(), theta_prime.reversed(), rep.j_bwd, rep.vertex_bwd,
            rep.branch_point_bwd);

    if (rep.vertex_fwd && rep.vertex_bwd) {
        // A forward, B backward; fold the segment BA back from B's frame
        const Point<S>& A = *rep.branch_point_fwd;
        const Point<S>& B = *rep.branch_point_bwd;
        if (!(A == B)) {
            auto wb = detail::corridor_word(p, PhasePoint<S>{q0, theta.reversed(), {}}, N);
            auto mb = Isometry<S>::identity();
            for (std::size_t i = 0; i + 1 < rep.j_bwd; ++i)
                mb = mb.compose(reflect_across_line(p.side((*wb)[i])));
            Vec2<S> d0 = mb.inverse().apply_linear(A - B);
            std::size_t want = rep.j_fwd + rep.j_bwd - 1;
            if (auto run = trace_between_vertices(p, *rep.vertex_bwd, Dir<S>{d0}, want)) {
                if (run->links == want && run->end_vertex == *rep.vertex_fwd) {
                    rep.diagonal = detail::diagonal_from_run(p, *run);
                } else if (run->links < want) {
                    // did the fold-back stop at a vertex image lying on AB?
                    auto mr = mb;
                    for (std::size_t side : run->word)
                        mr = mr.compose(reflect_across_line(p.side(side)));
                    Point<S> C = mr.apply(p.vertex(run->end_vertex));
                    using T = ScalarTraits<S>;
                    if (T::sign(cross(A - B, C - B)) == 0 &&
                        T::sign(dot(C - B, A - B)) > 0 &&
                        T::sign(dot(C - A, B - A)) > 0) {
                        rep.degenerate_chain = true;
                        rep.chain_vertex = C;
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace billiard
