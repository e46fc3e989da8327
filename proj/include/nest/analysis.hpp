#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "centrality.hpp"
#include "graph.hpp"
#include "refinement.hpp"

namespace nest {

inline double sae(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw error("vectors differ in length");
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
    return s;
}

inline double mae(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw error("vectors differ in length");
    double m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

inline double sae(const CentralityVector& x, const CentralityVector& y) {
    return sae(x.values, y.values);
}

inline double mae(const CentralityVector& x, const CentralityVector& y) {
    return mae(x.values, y.values);
}

// One minus the Jaccard similarity of the two edge sets: 0 for identical
// graphs, 1 when they share no edge. Directed graphs compare ordered pairs;
// undirected graphs compare canonical unordered pairs.
inline double jaccard_diversity(const Graph& g1, const Graph& g2) {
    if (g1.n() != g2.n() || g1.directed() != g2.directed())
        throw error("jaccard diversity needs graphs with equal node count and directedness");
    const auto e1 = g1.edges(), e2 = g2.edges();
    std::size_t inter = 0, i = 0, j = 0;
    while (i < e1.size() && j < e2.size()) {
        if (e1[i] == e2[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (e1[i] < e2[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = e1.size() + e2.size() - inter;
    if (uni == 0) return 0.0; // two empty graphs are identical
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

// A-priori bound on the 1-norm PageRank difference between a graph and any
// depth-d sample: 2 * alpha^(d+1).
inline double worstcase_pr_bound(double alpha, std::uint32_t d) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw error("damping factor must lie in [0,1)");
    return 2.0 * std::pow(alpha, static_cast<double>(d) + 1.0);
}

// Data-dependent bound from the original graph's own iterate residual:
// (2/(1-alpha)) * ||x^(k-1) - x^(k)||_1, iterates started from the uniform
// unit-1-norm vector.
inline double adaptive_pr_bound(const Graph& g, double alpha, std::uint32_t k) {
    if (k < 1) throw error("adaptive bound needs k >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw error("damping factor must lie in [0,1)");
    const IterationTrace trace =
        power_iterates(g, PowerKind::pagerank_kind(alpha), k, uniform_start(g));
    return 2.0 / (1.0 - alpha) * sae(trace.iterates[k - 1], trace.iterates[k]);
}

// Additive slack absorbing floating-point noise when observed errors are
// compared against the analytic bounds.
inline constexpr double kBoundTolerance = 1e-12;

struct ComparisonReport {
    double sae = 0.0;
    double mae = 0.0;
    double jaccard_diversity = 0.0;
    double bound_worstcase = 0.0;
    double bound_adaptive = 0.0;
    std::uint32_t colors_preserved_to_depth = 0;
    bool preserved_at_every_depth = false; // stable partitions equal => equal at all t
    bool colors_pass = false;              // preserved at least to the requested depth
    bool bounds_checked = false;           // bound hypotheses hold for this init/mode
    bool bounds_pass = false;              // observed PageRank error within both bounds
    bool pass = false;
};

namespace detail {

// The PageRank bounds assume initial colors at least as fine as the
// out-degree partition, aggregated over in-neighborhoods. On undirected
// graphs every aggregation mode coincides with the neighbor multiset, so only
// the degree condition remains.
inline bool pr_bound_hypotheses(const Graph& g, const Coloring& c0, RefineMode mode) {
    if (g.directed() && mode != RefineMode::In) return false;
    std::vector<std::int64_t> class_deg(c0.k, -1);
    for (NodeId v = 0; v < g.n(); ++v) {
        const auto d = static_cast<std::int64_t>(g.out_neighbors(v).size());
        auto& slot = class_deg[c0.colors[v]];
        if (slot < 0)
            slot = d;
        else if (slot != d)
            return false;
    }
    return true;
}

} // namespace detail

// Verification harness for one sample: recompute the refinement on both
// graphs, find the deepest depth with identical canonical colors, compare
// PageRank, and test the observed error against both bounds where their
// hypotheses apply.
inline ComparisonReport audit_sample(const Graph& original, const Graph& sample, std::uint32_t d,
                                     const ColorInit& init, RefineMode mode,
                                     double alpha = kDefaultAlpha) {
    if (original.n() != sample.n() || original.directed() != sample.directed())
        throw error("audit needs graphs with equal node count and directedness");
    if (d < 1) throw error("audit depth must be at least 1");

    // initial colors are fixed node labels, carried to the sample verbatim;
    // the comparison refines both graphs in one shared signature space so it
    // checks color equality, not just partition equality
    const Coloring c0 = initial_coloring(original, init);
    const ColoringComparison cmp = compare_colorings(original, sample, c0.colors, mode);

    ComparisonReport rep;
    rep.colors_preserved_to_depth = cmp.matched_depth;
    rep.preserved_at_every_depth = cmp.all_depths;
    rep.colors_pass = cmp.all_depths || cmp.matched_depth >= d;

    const CentralityVector pr_o = pagerank(original, alpha);
    const CentralityVector pr_s = pagerank(sample, alpha);
    rep.sae = sae(pr_o, pr_s);
    rep.mae = mae(pr_o, pr_s);
    rep.jaccard_diversity = jaccard_diversity(original, sample);
    rep.bound_worstcase = worstcase_pr_bound(alpha, d);
    rep.bound_adaptive = adaptive_pr_bound(original, alpha, d);
    rep.bounds_checked = detail::pr_bound_hypotheses(original, c0, mode);
    if (rep.bounds_checked)
        rep.bounds_pass = rep.sae <= rep.bound_worstcase + kBoundTolerance &&
                          rep.sae <= rep.bound_adaptive + kBoundTolerance;
    rep.pass = rep.colors_pass && (!rep.bounds_checked || rep.bounds_pass);
    return rep;
}

} // namespace nest
