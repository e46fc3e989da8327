#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace nest {

using ColorId = std::uint32_t;

// Neighborhood aggregation used by one refinement round. On undirected graphs
// In/Out/Both all degenerate to the plain neighbor multiset. Gram runs the
// refinement on the weighted co-citation matrix A^T A instead of A.
enum class RefineMode { In, Out, Both, Undirected, Gram };

struct Coloring {
    std::vector<ColorId> colors; // dense IDs 0..k-1, assigned by first appearance
    ColorId k = 0;
    std::uint32_t depth = 0;

    std::size_t size() const { return colors.size(); }

    friend bool operator==(const Coloring& a, const Coloring& b) {
        return a.colors == b.colors; // canonical form makes this a partition comparison
    }
};

// Relabels arbitrary color values to dense 0..k-1 in order of first appearance
// over node IDs. Two colorings describe the same partition iff their canonical
// color vectors are identical.
inline Coloring canonicalize(const std::vector<ColorId>& raw, std::uint32_t depth = 0) {
    Coloring c;
    c.depth = depth;
    c.colors.resize(raw.size());
    std::unordered_map<ColorId, ColorId> remap;
    remap.reserve(raw.size());
    for (std::size_t v = 0; v < raw.size(); ++v) {
        auto [it, inserted] = remap.try_emplace(raw[v], static_cast<ColorId>(remap.size()));
        c.colors[v] = it->second;
    }
    c.k = static_cast<ColorId>(remap.size());
    return c;
}

// Initial coloring selector: every node alike, nodes grouped by out-degree, or
// caller-provided colors.
struct ColorInit {
    enum class Kind { Constant, OutDegree, External };
    Kind kind = Kind::Constant;
    std::vector<ColorId> external;

    static ColorInit constant() { return {}; }
    static ColorInit out_degree() { return {Kind::OutDegree, {}}; }
    static ColorInit from_colors(std::vector<ColorId> colors) {
        return {Kind::External, std::move(colors)};
    }
};

inline Coloring initial_coloring(const Graph& g, const ColorInit& init) {
    switch (init.kind) {
        case ColorInit::Kind::Constant:
            return canonicalize(std::vector<ColorId>(g.n(), 0), 0);
        case ColorInit::Kind::OutDegree: {
            std::vector<ColorId> raw(g.n());
            for (NodeId v = 0; v < g.n(); ++v)
                raw[v] = static_cast<ColorId>(g.out_neighbors(v).size());
            return canonicalize(raw, 0);
        }
        case ColorInit::Kind::External:
            if (init.external.size() != g.n())
                throw error("external coloring has length " + std::to_string(init.external.size()) +
                            ", graph has n=" + std::to_string(g.n()));
            return canonicalize(init.external, 0);
    }
    throw error("invalid coloring kind");
}

namespace detail {

struct VectorHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ v.size();
        for (std::uint32_t x : v) {
            h ^= x;
            h *= 0xBF58476D1CE4E5B9ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

// Sentinel separating the two multisets of a both-mode signature. Color IDs
// are < n <= 2^32 - 1, so this value never collides with a real color.
inline constexpr std::uint32_t kSigSeparator = 0xFFFFFFFFu;

// Weighted symmetric adjacency of A^T A (co-citation counts), diagonal
// included: entry (u,v) = number of nodes with edges to both u and v.
using GramAdjacency = std::vector<std::vector<std::pair<NodeId, std::uint32_t>>>;

inline GramAdjacency build_gram_adjacency(const Graph& g) {
    std::vector<std::map<NodeId, std::uint32_t>> rows(g.n());
    for (NodeId w = 0; w < g.n(); ++w)
        for (NodeId u : g.out_neighbors(w))
            for (NodeId v : g.out_neighbors(w)) ++rows[u][v];
    GramAdjacency adj(g.n());
    for (NodeId u = 0; u < g.n(); ++u) adj[u].assign(rows[u].begin(), rows[u].end());
    return adj;
}

// Groups nodes by signature and hands out dense IDs in node order: the
// injective "hash" of the refinement step, realized structurally.
class SignatureGrouper {
public:
    explicit SignatureGrouper(std::size_t n) { ids_.reserve(n); }

    ColorId id_for(std::vector<std::uint32_t>&& sig) {
        auto [it, inserted] = ids_.try_emplace(std::move(sig), static_cast<ColorId>(ids_.size()));
        return it->second;
    }

    ColorId distinct() const { return static_cast<ColorId>(ids_.size()); }

private:
    std::unordered_map<std::vector<std::uint32_t>, ColorId, VectorHash> ids_;
};

inline void append_sorted_colors(std::vector<std::uint32_t>& sig, std::span<const NodeId> nodes,
                                 const std::vector<ColorId>& c) {
    const std::size_t base = sig.size();
    for (NodeId x : nodes) sig.push_back(c[x]);
    std::sort(sig.begin() + static_cast<std::ptrdiff_t>(base), sig.end());
}

// One refinement round on top of the colors in `c`. `extra`, if non-null, is a
// per-node auxiliary coloring folded into every signature (own value plus the
// neighbors' values), used for external color injection.
inline std::vector<ColorId> refine_round_raw(const Graph& g, const std::vector<ColorId>& c,
                                             RefineMode mode, const GramAdjacency* gram = nullptr,
                                             const std::vector<ColorId>* extra = nullptr) {
    if (mode == RefineMode::Undirected && g.directed())
        throw error("undirected refinement mode on a directed graph");
    const bool both = g.directed() && mode == RefineMode::Both;
    const bool use_in = g.directed() && (mode == RefineMode::In || mode == RefineMode::Both);
    SignatureGrouper grouper(g.n());
    std::vector<ColorId> next(g.n());
    std::vector<std::uint32_t> sig;
    for (NodeId v = 0; v < g.n(); ++v) {
        sig.clear();
        sig.push_back(c[v]);
        if (extra) sig.push_back((*extra)[v]);
        if (mode == RefineMode::Gram) {
            std::vector<std::array<std::uint32_t, 3>> entries;
            entries.reserve((*gram)[v].size());
            for (const auto& [x, w] : (*gram)[v])
                entries.push_back({c[x], w, extra ? (*extra)[x] : 0});
            std::sort(entries.begin(), entries.end());
            for (const auto& e : entries) {
                sig.push_back(e[0]);
                sig.push_back(e[1]);
                sig.push_back(e[2]);
            }
        } else {
            const auto first = use_in ? g.in_neighbors(v) : g.out_neighbors(v);
            if (extra) {
                std::vector<std::pair<ColorId, ColorId>> pairs;
                pairs.reserve(first.size());
                for (NodeId x : first) pairs.emplace_back(c[x], (*extra)[x]);
                std::sort(pairs.begin(), pairs.end());
                for (const auto& [a, b] : pairs) {
                    sig.push_back(a);
                    sig.push_back(b);
                }
            } else {
                append_sorted_colors(sig, first, c);
            }
            if (both) {
                sig.push_back(kSigSeparator);
                if (extra) {
                    std::vector<std::pair<ColorId, ColorId>> pairs;
                    for (NodeId x : g.out_neighbors(v)) pairs.emplace_back(c[x], (*extra)[x]);
                    std::sort(pairs.begin(), pairs.end());
                    for (const auto& [a, b] : pairs) {
                        sig.push_back(a);
                        sig.push_back(b);
                    }
                } else {
                    append_sorted_colors(sig, g.out_neighbors(v), c);
                }
            }
        }
        next[v] = grouper.id_for(std::move(sig));
        sig = {};
    }
    return next;
}

} // namespace detail

// One refinement round; input and output are canonical colorings.
inline Coloring refine_round(const Graph& g, const Coloring& c, RefineMode mode) {
    if (c.colors.size() != g.n()) throw error("coloring length does not match graph");
    const detail::GramAdjacency gram =
        mode == RefineMode::Gram ? detail::build_gram_adjacency(g) : detail::GramAdjacency{};
    auto next = detail::refine_round_raw(g, c.colors, mode,
                                         mode == RefineMode::Gram ? &gram : nullptr);
    return canonicalize(next, c.depth + 1);
}

// Per-depth colorings c^(0)..c^(D). stable_depth is the smallest t with
// c^(t) == c^(t+1), recorded only once reached; with canonical colorings this
// equality is exactly partition equivalence, so ID churn cannot mask it.
struct RefinementHistory {
    std::vector<Coloring> colorings;
    std::optional<std::uint32_t> stable_depth;
    RefineMode mode = RefineMode::Undirected;

    std::uint32_t max_depth() const {
        return static_cast<std::uint32_t>(colorings.size()) - 1;
    }

    const Coloring& at(std::uint32_t t) const {
        if (t >= colorings.size())
            throw error("depth " + std::to_string(t) + " not recorded (max " +
                        std::to_string(max_depth()) + ")");
        return colorings[t];
    }

    // Coloring at depth t for arbitrary t: past a recorded stable depth the
    // partition no longer changes, so the deepest recorded coloring stands in.
    const Coloring& clamped(std::uint32_t t) const {
        if (t < colorings.size()) return colorings[t];
        if (!stable_depth)
            throw error("depth " + std::to_string(t) + " not recorded and history is not stable");
        return colorings.back();
    }
};

struct UntilStable {};

namespace detail {

inline RefinementHistory refine_impl(const Graph& g, const Coloring& init, RefineMode mode,
                                     std::optional<std::uint32_t> depth) {
    if (init.colors.size() != g.n()) throw error("initial coloring length does not match graph");
    const GramAdjacency gram = mode == RefineMode::Gram ? build_gram_adjacency(g) : GramAdjacency{};
    const GramAdjacency* gp = mode == RefineMode::Gram ? &gram : nullptr;

    RefinementHistory h;
    h.mode = mode;
    h.colorings.push_back(canonicalize(init.colors, 0));
    // A strict refinement adds at least one class, so stability always arrives
    // within n rounds.
    const std::uint32_t limit = depth ? *depth : std::max<std::uint32_t>(g.n(), 1);
    for (std::uint32_t t = 0; t < limit; ++t) {
        if (h.stable_depth) {
            // fixed-depth request past stability: the partition repeats
            Coloring copy = h.colorings.back();
            copy.depth = t + 1;
            h.colorings.push_back(std::move(copy));
            continue;
        }
        Coloring next = canonicalize(refine_round_raw(g, h.colorings.back().colors, mode, gp), t + 1);
        if (next == h.colorings.back()) {
            h.stable_depth = t;
            if (!depth) break;
        }
        h.colorings.push_back(std::move(next));
    }
    if (!depth && !h.stable_depth) {
        // unreachable mathematically; guards the loop bound
        throw error("refinement failed to stabilize within n rounds");
    }
    return h;
}

} // namespace detail

inline RefinementHistory refine(const Graph& g, const Coloring& init, RefineMode mode,
                                std::uint32_t depth) {
    return detail::refine_impl(g, init, mode, depth);
}

inline RefinementHistory refine(const Graph& g, const Coloring& init, RefineMode mode, UntilStable) {
    return detail::refine_impl(g, init, mode, std::nullopt);
}

// True iff one more refinement round does not split any class.
inline bool is_equitable(const Graph& g, const Coloring& coloring, RefineMode mode) {
    Coloring c = canonicalize(coloring.colors, coloring.depth);
    return refine_round(g, c, mode).k == c.k;
}

// Class-level view of a coloring: membership, class sizes, and (for stable
// colorings) the k x k table whose (i,j) entry is the number of neighbors of
// color j that every node of color i has. Directed graphs count in-neighbors,
// matching the transposed-adjacency orientation the centrality iterations use.
struct QuotientView {
    std::vector<ColorId> colors;
    std::vector<std::uint32_t> class_sizes;
    std::vector<std::vector<std::int64_t>> quotient;
};

namespace detail {

inline std::span<const NodeId> quotient_neighbors(const Graph& g, NodeId v, RefineMode mode) {
    if (mode == RefineMode::Gram) throw error("quotient is not defined for gram mode");
    if (!g.directed()) return g.neighbors(v);
    if (mode == RefineMode::Undirected)
        throw error("undirected refinement mode on a directed graph");
    return mode == RefineMode::Out ? g.out_neighbors(v) : g.in_neighbors(v);
}

} // namespace detail

inline QuotientView quotient(const Graph& g, const Coloring& coloring, RefineMode mode) {
    if (coloring.colors.size() != g.n()) throw error("coloring length does not match graph");
    if (!is_equitable(g, coloring, mode))
        throw error("quotient table requested for a non-equitable coloring");
    Coloring c = canonicalize(coloring.colors, coloring.depth);
    QuotientView q;
    q.colors = c.colors;
    q.class_sizes.assign(c.k, 0);
    for (ColorId col : c.colors) ++q.class_sizes[col];
    q.quotient.assign(c.k, std::vector<std::int64_t>(c.k, 0));
    std::vector<bool> seen(c.k, false);
    for (NodeId v = 0; v < g.n(); ++v) {
        const ColorId i = c.colors[v];
        if (seen[i]) continue;
        seen[i] = true;
        for (NodeId x : detail::quotient_neighbors(g, v, mode)) ++q.quotient[i][c.colors[x]];
    }
    return q;
}

// Count table relating depth-t classes to depth-(t+1) classes: entry (i,j) is
// the number of depth-t-class-j neighbors that every node of depth-(t+1)
// class i has. Defined because a node's next color encodes exactly that
// neighbor multiset.
inline std::vector<std::vector<std::int64_t>> crossdepth(const Graph& g,
                                                         const RefinementHistory& h,
                                                         std::uint32_t t_plus_1) {
    if (t_plus_1 == 0 || t_plus_1 > h.max_depth())
        throw error("crossdepth needs two consecutive recorded depths");
    const Coloring& fine = h.at(t_plus_1);
    const Coloring& coarse = h.at(t_plus_1 - 1);
    std::vector<std::vector<std::int64_t>> x(fine.k, std::vector<std::int64_t>(coarse.k, 0));
    std::vector<bool> seen(fine.k, false);
    for (NodeId v = 0; v < g.n(); ++v) {
        const ColorId i = fine.colors[v];
        std::vector<std::int64_t> row(coarse.k, 0);
        for (NodeId u : detail::quotient_neighbors(g, v, h.mode)) ++row[coarse.colors[u]];
        if (!seen[i]) {
            seen[i] = true;
            x[i] = std::move(row);
        } else if (x[i] != row) {
            throw error("crossdepth counts are not constant within a class");
        }
    }
    return x;
}

// Refine one more step from the history's deepest coloring, but let only the
// listed classes push their color: nodes aggregate the colors of just those
// neighbors that lie in a pushing class. The result sits between c^(d) and
// c^(d+1) in refinement order; pushing all classes reproduces c^(d+1), pushing
// none reproduces c^(d).
inline Coloring partial_refine(const Graph& g, const RefinementHistory& h,
                               const std::vector<ColorId>& pushing_classes) {
    if (h.mode == RefineMode::Gram) throw error("partial refinement is not defined for gram mode");
    const Coloring& c = h.colorings.back();
    std::vector<bool> pushing(c.k, false);
    for (ColorId cls : pushing_classes) {
        if (cls >= c.k) throw error("unknown class ID " + std::to_string(cls));
        pushing[cls] = true;
    }
    const bool both = g.directed() && h.mode == RefineMode::Both;
    const bool use_in = g.directed() && (h.mode == RefineMode::In || h.mode == RefineMode::Both);
    detail::SignatureGrouper grouper(g.n());
    std::vector<ColorId> next(g.n());
    for (NodeId v = 0; v < g.n(); ++v) {
        std::vector<std::uint32_t> sig;
        sig.push_back(c.colors[v]);
        const auto push_filtered = [&](std::span<const NodeId> nodes) {
            const std::size_t base = sig.size();
            for (NodeId x : nodes)
                if (pushing[c.colors[x]]) sig.push_back(c.colors[x]);
            std::sort(sig.begin() + static_cast<std::ptrdiff_t>(base), sig.end());
        };
        push_filtered(use_in ? g.in_neighbors(v) : g.out_neighbors(v));
        if (both) {
            sig.push_back(detail::kSigSeparator);
            push_filtered(g.out_neighbors(v));
        }
        next[v] = grouper.id_for(std::move(sig));
    }
    return canonicalize(next, c.depth);
}

// Rebuilds the rounds after depth t with the external colors folded into the
// round-(t+1) signatures (each node contributes its own external color and
// sees its neighbors'). Depths <= t are untouched. A history that was refined
// to stability is extended until it stabilizes again; a fixed-depth history is
// rebuilt to the same depth.
inline RefinementHistory inject_external_colors(const Graph& g, const RefinementHistory& h,
                                                const Coloring& external, std::uint32_t at_depth) {
    if (external.colors.size() != g.n()) throw error("external coloring length does not match graph");
    if (at_depth > h.max_depth())
        throw error("injection depth " + std::to_string(at_depth) + " exceeds recorded depth " +
                    std::to_string(h.max_depth()));
    const Coloring ext = canonicalize(external.colors, 0);
    const detail::GramAdjacency gram =
        h.mode == RefineMode::Gram ? detail::build_gram_adjacency(g) : detail::GramAdjacency{};
    const detail::GramAdjacency* gp = h.mode == RefineMode::Gram ? &gram : nullptr;

    // A history whose deepest recorded round is its stable round was refined
    // to stability; anything else was a fixed-depth request.
    const bool to_stability = h.stable_depth && *h.stable_depth == h.max_depth();

    RefinementHistory out;
    out.mode = h.mode;
    out.colorings.assign(h.colorings.begin(), h.colorings.begin() + at_depth + 1);

    bool injected_round = true; // only round at_depth -> at_depth+1 sees the extra colors
    while (to_stability || out.colorings.back().depth < h.max_depth()) {
        const Coloring& back = out.colorings.back();
        const std::uint32_t t = back.depth + 1;
        if (t > g.n() + at_depth + 1) throw error("injected refinement failed to stabilize");
        Coloring next = canonicalize(
            detail::refine_round_raw(g, back.colors, h.mode, gp,
                                     injected_round ? &ext.colors : nullptr),
            t);
        injected_round = false;
        if (next == back) {
            // plain rounds follow the injected one, so this equality is a
            // genuine fixpoint of the remaining refinement
            if (!out.stable_depth) out.stable_depth = back.depth;
            if (to_stability) break;
        }
        out.colorings.push_back(std::move(next));
    }
    // an injection that changes no coloring keeps the original stability record
    if (out.colorings.size() == h.colorings.size() &&
        std::equal(out.colorings.begin(), out.colorings.end(), h.colorings.begin()))
        out.stable_depth = h.stable_depth;
    return out;
}

// Result of comparing the refinement colors of two graphs node by node.
// matched_depth is the largest t such that every node has the same color in
// both graphs at every depth <= t; all_depths means the colorings agree at the
// joint stable depth and hence at every depth.
struct ColoringComparison {
    std::uint32_t matched_depth = 0;
    bool all_depths = false;
};

// Compares the colors themselves, not just the induced partitions: the two
// graphs are refined together as one disjoint union so their signatures live
// in a shared color space. Node v of `a` is matched against node v of `b`.
// Both graphs must have the same node count and directedness, and `initial`
// gives the shared fixed node labels.
inline ColoringComparison compare_colorings(const Graph& a, const Graph& b,
                                            const std::vector<ColorId>& initial, RefineMode mode) {
    if (a.n() != b.n()) throw error("coloring comparison: node counts differ");
    if (a.directed() != b.directed()) throw error("coloring comparison: directedness differs");
    if (initial.size() != a.n()) throw error("coloring comparison: initial coloring length mismatch");
    const NodeId n = a.n();
    std::vector<Edge> edges(a.edges().begin(), a.edges().end());
    for (const Edge& e : b.edges()) edges.push_back({e.u + n, e.v + n});
    Graph u(n * 2, a.directed(), std::move(edges));
    std::vector<ColorId> doubled(initial);
    doubled.insert(doubled.end(), initial.begin(), initial.end());
    const RefinementHistory h =
        refine(u, initial_coloring(u, ColorInit::from_colors(doubled)), mode, UntilStable{});

    // once a node's colors diverge they stay diverged (the own-color feeds every
    // later signature), so agreement is a prefix property over depth
    ColoringComparison out;
    for (std::uint32_t t = 0; t <= h.max_depth(); ++t) {
        const auto& colors = h.at(t).colors;
        for (NodeId v = 0; v < n; ++v)
            if (colors[v] != colors[n + v]) return out;
        out.matched_depth = t;
    }
    out.all_depths = true;
    return out;
}

} // namespace nest
