#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "refinement.hpp"
#include "rng.hpp"

namespace nest {

// One edge-partition cell: all edges whose endpoint colors are (ci, cj). For
// undirected graphs the key is unordered (ci <= cj) and bipartite cells keep
// their edges oriented ci-side first; directed graphs keep (ci, cj) ordered.
struct Block {
    ColorId ci = 0;
    ColorId cj = 0;
    bool directed = false;
    std::vector<Edge> edges;
    std::vector<NodeId> nodes; // nodes incident to block edges, sorted; invariant under moves
    std::unordered_map<std::uint64_t, std::uint32_t> slot_of; // edge code -> index in edges

    bool unicolored() const { return ci == cj; }

    std::uint64_t code(NodeId u, NodeId v) const {
        if (!directed && u > v) std::swap(u, v);
        return (static_cast<std::uint64_t>(u) << 32) | v;
    }

    bool contains(NodeId u, NodeId v) const { return slot_of.count(code(u, v)) != 0; }
};

struct SubgraphPartition {
    std::vector<Block> blocks; // sorted by (ci, cj)

    std::size_t total_edges() const {
        std::size_t s = 0;
        for (const auto& b : blocks) s += b.edges.size();
        return s;
    }
};

// Splits the edge set by the endpoint colors of the given (depth d-1)
// coloring. Every edge lands in exactly one block.
inline SubgraphPartition partition_edges(const Graph& g, const Coloring& coloring) {
    if (coloring.colors.size() != g.n()) throw error("coloring length does not match graph");
    std::map<std::pair<ColorId, ColorId>, std::vector<Edge>> cells;
    for (Edge e : g.edges()) {
        ColorId a = coloring.colors[e.u], b = coloring.colors[e.v];
        if (!g.directed() && a > b) {
            std::swap(a, b);
            std::swap(e.u, e.v); // bipartite cells hold edges oriented ci-side first
        }
        cells[{a, b}].push_back(e);
    }
    SubgraphPartition part;
    part.blocks.reserve(cells.size());
    for (auto& [key, edges] : cells) {
        Block b;
        b.ci = key.first;
        b.cj = key.second;
        b.directed = g.directed();
        b.edges = std::move(edges);
        b.slot_of.reserve(b.edges.size() * 2);
        for (std::uint32_t i = 0; i < b.edges.size(); ++i) {
            b.nodes.push_back(b.edges[i].u);
            b.nodes.push_back(b.edges[i].v);
            b.slot_of.emplace(b.code(b.edges[i].u, b.edges[i].v), i);
        }
        std::sort(b.nodes.begin(), b.nodes.end());
        b.nodes.erase(std::unique(b.nodes.begin(), b.nodes.end()), b.nodes.end());
        part.blocks.push_back(std::move(b));
    }
    return part;
}

struct BlockStats {
    ColorId ci = 0;
    ColorId cj = 0;
    std::uint64_t edges = 0;
    std::uint64_t attempts = 0;
    std::uint64_t accepted_swaps = 0;
    std::uint64_t rejected = 0;
    std::uint64_t triangle_attempts = 0;
    std::uint64_t accepted_triangles = 0;
};

struct SwapStats {
    std::vector<BlockStats> blocks;

    std::uint64_t total_attempts() const {
        std::uint64_t s = 0;
        for (const auto& b : blocks) s += b.attempts + b.triangle_attempts;
        return s;
    }
    std::uint64_t total_accepted() const {
        std::uint64_t s = 0;
        for (const auto& b : blocks) s += b.accepted_swaps + b.accepted_triangles;
        return s;
    }
};

// One double-edge-switch proposal: pick two edge slots with replacement,
// replace {u1v1, u2v2} by {u1v2, u2v1} when all four endpoints are distinct
// and neither replacement edge exists. Anything else leaves the block
// unchanged (a self-loop of the chain, which keeps it aperiodic). Edges of an
// undirected single-color block get their orientation randomized first;
// without that the proposal could never exchange the roles of an edge's two
// endpoints.
inline bool edge_swap_attempt(Block& b, Rng& rng) {
    const std::size_t m = b.edges.size();
    if (m < 2) return false;
    const std::size_t i = rng.below(m), j = rng.below(m);
    if (i == j) return false;
    Edge e1 = b.edges[i], e2 = b.edges[j];
    if (!b.directed && b.unicolored()) {
        if (rng.coin()) std::swap(e1.u, e1.v);
        if (rng.coin()) std::swap(e2.u, e2.v);
    }
    const NodeId u1 = e1.u, v1 = e1.v, u2 = e2.u, v2 = e2.v;
    if (u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2) return false;
    if (b.contains(u1, v2) || b.contains(u2, v1)) return false;
    b.slot_of.erase(b.code(u1, v1));
    b.slot_of.erase(b.code(u2, v2));
    b.edges[i] = {u1, v2};
    b.edges[j] = {u2, v1};
    b.slot_of.emplace(b.code(u1, v2), static_cast<std::uint32_t>(i));
    b.slot_of.emplace(b.code(u2, v1), static_cast<std::uint32_t>(j));
    return true;
}

// Directed-triangle proposal: three draws from the block's node set; if they
// are distinct and form a directed 3-cycle inside the block, the cycle's
// orientation is reversed. Plain switches cannot perform this reversal, so
// single-color directed blocks need it for the chain to reach every graph.
inline bool triangle_swap_attempt(Block& b, Rng& rng) {
    if (!b.directed || !b.unicolored()) throw error("triangle move applies to directed single-color blocks only");
    const std::size_t s = b.nodes.size();
    if (s < 3) return false;
    const NodeId a = b.nodes[rng.below(s)];
    const NodeId c = b.nodes[rng.below(s)];
    const NodeId d = b.nodes[rng.below(s)];
    if (a == c || a == d || c == d) return false;
    const auto ia = b.slot_of.find(b.code(a, c));
    const auto ic = b.slot_of.find(b.code(c, d));
    const auto id = b.slot_of.find(b.code(d, a));
    if (ia == b.slot_of.end() || ic == b.slot_of.end() || id == b.slot_of.end()) return false;
    // the reversed cycle must be absent, or reversal would duplicate an edge
    if (b.contains(c, a) || b.contains(d, c) || b.contains(a, d)) return false;
    const std::uint32_t sa = ia->second, sc = ic->second, sd = id->second;
    b.slot_of.erase(ia);
    b.slot_of.erase(ic);
    b.slot_of.erase(id);
    b.edges[sa] = {c, a};
    b.edges[sc] = {d, c};
    b.edges[sd] = {a, d};
    b.slot_of.emplace(b.code(c, a), sa);
    b.slot_of.emplace(b.code(d, c), sc);
    b.slot_of.emplace(b.code(a, d), sd);
    return true;
}

struct SamplerConfig {
    enum class Algorithm { PerSubgraph, GlobalRandom };
    enum class BlockChoice { Uniform, EdgeProportional };

    std::uint32_t depth = 1; // d >= 1
    ColorInit init;
    RefineMode mode = RefineMode::Undirected;
    double swap_rate = 10.0;                  // attempts per block edge (per-subgraph)
    std::optional<std::uint64_t> total_steps; // global-random; default 2|E|
    Algorithm algorithm = Algorithm::PerSubgraph;
    BlockChoice block_choice = BlockChoice::Uniform;
    std::uint64_t seed = 0;
    // Triangle proposals are a correctness requirement for directed
    // single-color blocks, so they are forced on there regardless.
    bool triangle_moves = true;
    unsigned threads = 0; // 0 = NEST_THREADS env var, else hardware default
};

namespace detail {

inline constexpr std::uint64_t kPerSubgraphTag = 0x73756267; // stream key tags
inline constexpr std::uint64_t kGlobalTag = 0x676c6f62;

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NEST_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Triangle proposals apply exactly to directed single-color blocks. The
// config flag documents the chain's requirement; a false value is overridden
// because the chain would otherwise not reach the whole ensemble.
inline bool wants_triangles(const Block& b) { return b.directed && b.unicolored(); }

// r * |E(g)| swap attempts on one block, each followed (in directed
// single-color blocks) by a triangle attempt. Skips blocks with fewer than
// two edges: no move can touch them.
inline void rewire_block(Block& b, const SamplerConfig& cfg, Rng rng, BlockStats& st) {
    st.ci = b.ci;
    st.cj = b.cj;
    st.edges = b.edges.size();
    if (b.edges.size() < 2) return;
    const bool triangles = wants_triangles(b);
    const std::uint64_t attempts =
        static_cast<std::uint64_t>(std::llround(cfg.swap_rate * static_cast<double>(b.edges.size())));
    for (std::uint64_t s = 0; s < attempts; ++s) {
        ++st.attempts;
        if (edge_swap_attempt(b, rng))
            ++st.accepted_swaps;
        else
            ++st.rejected;
        if (triangles && b.nodes.size() >= 3) {
            ++st.triangle_attempts;
            if (triangle_swap_attempt(b, rng)) ++st.accepted_triangles;
        }
    }
}

} // namespace detail

// Draws one graph from the neighborhood-structure ensemble: refine to depth
// d-1, partition the edges by endpoint color, rewire each block by random
// switches, and reassemble. The per-subgraph algorithm gives every block its
// own RNG stream derived from (seed, block key), so any execution order —
// including the parallel one — produces the identical graph.
inline std::pair<Graph, SwapStats> sample(const Graph& g, const SamplerConfig& cfg) {
    if (cfg.depth < 1) throw error("sampling depth must be at least 1");
    if (g.n() == 0) throw error("cannot sample from an empty graph");
    if (!(cfg.swap_rate > 0)) throw error("swap rate must be positive");
    const Coloring c0 = initial_coloring(g, cfg.init);
    const RefinementHistory h = refine(g, c0, cfg.mode, cfg.depth - 1);
    SubgraphPartition part = partition_edges(g, h.at(cfg.depth - 1));

    SwapStats stats;
    stats.blocks.resize(part.blocks.size());

    if (cfg.algorithm == SamplerConfig::Algorithm::PerSubgraph) {
        const unsigned threads =
            std::min<unsigned>(detail::resolve_threads(cfg.threads),
                               static_cast<unsigned>(std::max<std::size_t>(part.blocks.size(), 1)));
        const auto worker_body = [&](std::atomic<std::size_t>& next) {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= part.blocks.size()) return;
                Block& b = part.blocks[i];
                detail::rewire_block(b, cfg,
                                     derive_stream(cfg.seed, {detail::kPerSubgraphTag, b.ci, b.cj}),
                                     stats.blocks[i]);
            }
        };
        if (threads <= 1) {
            std::atomic<std::size_t> next{0};
            worker_body(next);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { worker_body(next); });
            for (auto& th : pool) th.join();
        }
    } else {
        Rng rng = derive_stream(cfg.seed, {detail::kGlobalTag});
        const std::uint64_t steps = cfg.total_steps.value_or(2 * static_cast<std::uint64_t>(g.m()));
        std::vector<std::uint64_t> cumulative;
        if (cfg.block_choice == SamplerConfig::BlockChoice::EdgeProportional) {
            cumulative.reserve(part.blocks.size());
            std::uint64_t acc = 0;
            for (const auto& b : part.blocks) {
                acc += b.edges.size();
                cumulative.push_back(acc);
            }
        }
        for (std::size_t i = 0; i < part.blocks.size(); ++i) {
            stats.blocks[i].ci = part.blocks[i].ci;
            stats.blocks[i].cj = part.blocks[i].cj;
            stats.blocks[i].edges = part.blocks[i].edges.size();
        }
        for (std::uint64_t s = 0; s < steps && !part.blocks.empty(); ++s) {
            std::size_t i;
            if (cfg.block_choice == SamplerConfig::BlockChoice::EdgeProportional) {
                const std::uint64_t t = rng.below(cumulative.back());
                i = static_cast<std::size_t>(
                    std::upper_bound(cumulative.begin(), cumulative.end(), t) - cumulative.begin());
            } else {
                i = static_cast<std::size_t>(rng.below(part.blocks.size()));
            }
            Block& b = part.blocks[i];
            BlockStats& st = stats.blocks[i];
            ++st.attempts;
            if (edge_swap_attempt(b, rng))
                ++st.accepted_swaps;
            else
                ++st.rejected;
            if (detail::wants_triangles(b) && b.nodes.size() >= 3) {
                ++st.triangle_attempts;
                if (triangle_swap_attempt(b, rng)) ++st.accepted_triangles;
            }
        }
    }

    std::vector<Edge> edges;
    edges.reserve(g.m());
    for (const auto& b : part.blocks) edges.insert(edges.end(), b.edges.begin(), b.edges.end());
    return {Graph(g.n(), g.directed(), std::move(edges)), std::move(stats)};
}

// Brute-force oracle: every labeled simple graph on the same nodes whose
// refinement colors agree with the original's at every depth t <= d. The
// number of node pairs is capped — the search space is 2^pairs.
inline std::vector<Graph> enumerate_ensemble(const Graph& g, std::uint32_t d, const ColorInit& init,
                                             RefineMode mode, std::uint32_t max_pair_slots = 22) {
    const std::uint64_t n = g.n();
    std::vector<std::pair<NodeId, NodeId>> slots;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = g.directed() ? 0 : u + 1; v < n; ++v)
            if (u != v) slots.emplace_back(u, v);
    if (slots.size() > max_pair_slots)
        throw error("ensemble enumeration infeasible: " + std::to_string(slots.size()) +
                    " node pairs exceed the cap of " + std::to_string(max_pair_slots));
    // the initial colors are fixed node labels: candidates reuse them verbatim,
    // and membership compares actual colors in a shared signature space
    const Coloring c0 = initial_coloring(g, init);

    std::vector<Graph> members;
    for (std::uint64_t mask = 0; mask < (1ULL << slots.size()); ++mask) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (mask & (1ULL << i)) edges.push_back({slots[i].first, slots[i].second});
        Graph cand(g.n(), g.directed(), std::move(edges));
        const ColoringComparison cmp = compare_colorings(g, cand, c0.colors, mode);
        if (cmp.all_depths || cmp.matched_depth >= d) members.push_back(std::move(cand));
    }
    return members;
}

} // namespace nest
