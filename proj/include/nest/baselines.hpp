#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "centrality.hpp"
#include "graph.hpp"
#include "rng.hpp"
#include "sampler.hpp"

namespace nest {

namespace detail {

// Bijection between cell indices and node pairs, in lexicographic order.
inline std::pair<NodeId, NodeId> pair_from_index(std::uint64_t k, NodeId n, bool directed) {
    if (directed) {
        const NodeId u = static_cast<NodeId>(k / (n - 1));
        const NodeId r = static_cast<NodeId>(k % (n - 1));
        return {u, r < u ? r : r + 1};
    }
    // walk the triangular rows; desk-scale n keeps this cheap
    NodeId u = 0;
    std::uint64_t row = n - 1;
    while (k >= row) {
        k -= row;
        ++u;
        --row;
    }
    return {u, static_cast<NodeId>(u + 1 + k)};
}

} // namespace detail

// Uniform simple graph with exactly m edges (the fixed-edge-count model, so a
// baseline sample always matches the original's density). Edge cells are
// drawn by Floyd's subset-sampling algorithm: uniform at every density.
inline Graph erdos_renyi(NodeId n, std::uint64_t m, bool directed, std::uint64_t seed) {
    const std::uint64_t cells =
        n < 2 ? 0 : (directed ? static_cast<std::uint64_t>(n) * (n - 1)
                              : static_cast<std::uint64_t>(n) * (n - 1) / 2);
    if (m > cells)
        throw error("cannot place " + std::to_string(m) + " edges into " + std::to_string(cells) +
                    " node pairs");
    Rng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(m * 2);
    for (std::uint64_t j = cells - m; j < cells; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        chosen.insert(chosen.count(t) ? j : t);
    }
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t k : chosen) {
        const auto [u, v] = detail::pair_from_index(k, n, directed);
        edges.push_back({u, v});
    }
    return Graph(n, directed, std::move(edges));
}

// Degree-sequence-preserving null model: depth-1 sampling with constant
// initial colors, which rewires within the single all-edges block.
inline Graph configuration_model(const Graph& g, std::uint64_t seed, double rate = 10.0) {
    SamplerConfig cfg;
    cfg.depth = 1;
    cfg.init = ColorInit::constant();
    cfg.mode = g.directed() ? RefineMode::Both : RefineMode::Undirected;
    cfg.swap_rate = rate;
    cfg.seed = seed;
    return sample(g, cfg).first;
}

struct ErgmConfig {
    double theta = 1.0; // similarity strength; 0 = unconstrained dyad flips
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    double alpha = kDefaultAlpha;
};

// Metropolis chain over graphs targeting p(G') proportional to
// exp(-10 * theta * ||PR(G') - PR(G)||_1). Each step proposes flipping one
// uniformly chosen dyad and recomputes PageRank for the candidate. The
// optional observer sees the state after every step (used by stationarity
// checks).
inline Graph ergm_pagerank(const Graph& g, const ErgmConfig& cfg,
                           const std::function<void(const Graph&)>& on_step = {}) {
    if (!(cfg.theta >= 0.0)) throw error("theta must be nonnegative");
    const NodeId n = g.n();
    if (n < 2) throw error("ergm needs at least two nodes");
    const std::uint64_t cells = g.directed() ? static_cast<std::uint64_t>(n) * (n - 1)
                                             : static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::vector<double> target = pagerank(g, cfg.alpha).values;
    const auto energy_of = [&](const Graph& state) {
        const std::vector<double> pr = pagerank(state, cfg.alpha).values;
        double e = 0;
        for (std::size_t i = 0; i < pr.size(); ++i) e += std::abs(pr[i] - target[i]);
        return e;
    };

    Rng rng(cfg.seed);
    Graph cur = g;
    double cur_energy = 0.0; // the chain starts at the original graph
    for (std::uint64_t s = 0; s < cfg.steps; ++s) {
        const auto [u, v] = detail::pair_from_index(rng.below(cells), n, g.directed());
        std::vector<Edge> edges(cur.edges().begin(), cur.edges().end());
        if (cur.has_edge(u, v)) {
            const Edge gone = !cur.directed() && u > v ? Edge{v, u} : Edge{u, v};
            std::erase(edges, gone);
        } else {
            edges.push_back({u, v});
        }
        Graph cand(n, g.directed(), std::move(edges));
        const double cand_energy = energy_of(cand);
        const double delta = cand_energy - cur_energy;
        if (delta <= 0 || rng.real() < std::exp(-10.0 * cfg.theta * delta)) {
            cur = std::move(cand);
            cur_energy = cand_energy;
        }
        if (on_step) on_step(cur);
    }
    return cur;
}

} // namespace nest
