#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "centrality.hpp"
#include "graph.hpp"
#include "refinement.hpp"
#include "sampler.hpp"

namespace nest {

inline const char* kind_slug(CentralityKind k) {
    switch (k) {
        case CentralityKind::PageRank: return "pr";
        case CentralityKind::Eigenvector: return "ev";
        case CentralityKind::Katz: return "katz";
        case CentralityKind::Authority: return "auth";
        case CentralityKind::Hub: return "hub";
    }
    return "?";
}

inline std::optional<CentralityKind> kind_from_slug(const std::string& s) {
    if (s == "pr") return CentralityKind::PageRank;
    if (s == "ev") return CentralityKind::Eigenvector;
    if (s == "katz") return CentralityKind::Katz;
    if (s == "auth") return CentralityKind::Authority;
    if (s == "hub") return CentralityKind::Hub;
    return std::nullopt;
}

// Initial coloring and aggregation mode each centrality is sampled under:
// PageRank constrains out-degrees (so its preservation guarantees apply), the
// single-vector spectral scores use in-neighborhoods from a constant start,
// and the authority/hub pair needs both directions. Undirected graphs have
// only one aggregation.
inline std::pair<ColorInit, RefineMode> sampling_protocol(CentralityKind kind, bool directed) {
    if (!directed) {
        return {kind == CentralityKind::PageRank ? ColorInit::out_degree() : ColorInit::constant(),
                RefineMode::Undirected};
    }
    switch (kind) {
        case CentralityKind::PageRank: return {ColorInit::out_degree(), RefineMode::In};
        case CentralityKind::Eigenvector:
        case CentralityKind::Katz: return {ColorInit::constant(), RefineMode::In};
        case CentralityKind::Authority:
        case CentralityKind::Hub: return {ColorInit::constant(), RefineMode::Both};
    }
    return {ColorInit::constant(), RefineMode::In};
}

// Computes one centrality of one graph, per the experiment's defaults.
inline CentralityVector centrality_of(const Graph& g, CentralityKind kind, double alpha,
                                      std::optional<double> katz_a) {
    switch (kind) {
        case CentralityKind::PageRank: return pagerank(g, alpha);
        case CentralityKind::Eigenvector: return eigenvector_centrality(g);
        case CentralityKind::Katz: return katz(g, katz_a);
        case CentralityKind::Authority: return hits(g).first;
        case CentralityKind::Hub: return hits(g).second;
    }
    throw error("unknown centrality kind");
}

struct ExperimentSpec {
    std::string graph_path; // informational; the runner receives a loaded graph
    bool directed = false;
    std::vector<CentralityKind> kinds = {CentralityKind::PageRank};
    std::uint32_t depth_min = 1;
    std::uint32_t depth_max = 3;
    std::uint32_t samples = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
    double alpha = kDefaultAlpha;
    std::optional<double> katz_a;
    double swap_rate = 10.0;
    SamplerConfig::Algorithm algorithm = SamplerConfig::Algorithm::PerSubgraph;
    unsigned threads = 0;
    bool runtime_column = true; // drop for strictly byte-identical reruns
};

struct ExperimentCell {
    std::uint32_t depth = 0;
    std::uint32_t sample_idx = 0;
    double sae_value = 0;
    double mae_value = 0;
    double jaccard = 0;
    double bound_worstcase = 0;
    double bound_adaptive = 0;
    double runtime_ms = 0;
};

struct ExperimentResult {
    CentralityKind kind = CentralityKind::PageRank;
    std::vector<ExperimentCell> cells; // ordered by (depth, sample_idx)
};

struct ExperimentSummaryRow {
    std::uint32_t depth = 0;
    std::size_t n_samples = 0;
    double median_sae = 0, q16_sae = 0, q84_sae = 0;
    double median_mae = 0, q16_mae = 0, q84_mae = 0;
    double median_jaccard = 0, q16_jaccard = 0, q84_jaccard = 0;
};

// Quantile with linear interpolation between order statistics (the same
// convention as numpy's default), on a pre-sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw error("quantile of an empty sample");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline constexpr double kSummarySaeFloor = 1e-16;

// Median and 16%/84% quantiles per depth. Summary SAE values are floored at
// 1e-16; the raw per-sample rows keep exact values.
inline std::vector<ExperimentSummaryRow> summarize(const ExperimentResult& r) {
    std::vector<ExperimentSummaryRow> rows;
    std::size_t i = 0;
    while (i < r.cells.size()) {
        std::size_t j = i;
        while (j < r.cells.size() && r.cells[j].depth == r.cells[i].depth) ++j;
        std::vector<double> saes, maes, jacs;
        for (std::size_t t = i; t < j; ++t) {
            saes.push_back(std::max(r.cells[t].sae_value, kSummarySaeFloor));
            maes.push_back(r.cells[t].mae_value);
            jacs.push_back(r.cells[t].jaccard);
        }
        std::sort(saes.begin(), saes.end());
        std::sort(maes.begin(), maes.end());
        std::sort(jacs.begin(), jacs.end());
        ExperimentSummaryRow row;
        row.depth = r.cells[i].depth;
        row.n_samples = j - i;
        row.median_sae = quantile_sorted(saes, 0.50);
        row.q16_sae = quantile_sorted(saes, 0.16);
        row.q84_sae = quantile_sorted(saes, 0.84);
        row.median_mae = quantile_sorted(maes, 0.50);
        row.q16_mae = quantile_sorted(maes, 0.16);
        row.q84_mae = quantile_sorted(maes, 0.84);
        row.median_jaccard = quantile_sorted(jacs, 0.50);
        row.q16_jaccard = quantile_sorted(jacs, 0.16);
        row.q84_jaccard = quantile_sorted(jacs, 0.84);
        rows.push_back(row);
        i = j;
    }
    return rows;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace detail

// Runs every (kind, depth, sample) cell; cells are independent and processed
// by a small worker pool, each with a seed derived from (master seed, kind,
// depth, index), so results do not depend on scheduling.
inline std::vector<ExperimentResult> run_experiment(const Graph& g, const ExperimentSpec& spec) {
    if (spec.depth_min < 1 || spec.depth_max < spec.depth_min) throw error("invalid depth range");
    if (spec.samples < 1) throw error("need at least one sample per depth");
    if (spec.kinds.empty()) throw error("no centrality kinds requested");

    struct Task {
        std::size_t kind_i;
        std::uint32_t depth;
        std::uint32_t idx;
    };
    std::vector<Task> tasks;
    for (std::size_t k = 0; k < spec.kinds.size(); ++k)
        for (std::uint32_t d = spec.depth_min; d <= spec.depth_max; ++d)
            for (std::uint32_t s = 0; s < spec.samples; ++s) tasks.push_back({k, d, s});

    std::vector<CentralityVector> originals;
    originals.reserve(spec.kinds.size());
    for (CentralityKind kind : spec.kinds)
        originals.push_back(centrality_of(g, kind, spec.alpha, spec.katz_a));
    std::vector<double> adaptive_by_depth(spec.depth_max + 1, 0.0);
    for (std::uint32_t d = spec.depth_min; d <= spec.depth_max; ++d)
        adaptive_by_depth[d] = adaptive_pr_bound(g, spec.alpha, d);

    std::vector<ExperimentCell> cells(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const Task& t = tasks[i];
                const CentralityKind kind = spec.kinds[t.kind_i];
                const auto [init, mode] = sampling_protocol(kind, g.directed());
                SamplerConfig cfg;
                cfg.depth = t.depth;
                cfg.init = init;
                cfg.mode = mode;
                cfg.swap_rate = spec.swap_rate;
                cfg.algorithm = spec.algorithm;
                cfg.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(t.kind_i), t.depth, t.idx});
                cfg.threads = 1; // parallelism lives at the cell level here
                const auto start = std::chrono::steady_clock::now();
                const Graph sampled = sample(g, cfg).first;
                const CentralityVector score = centrality_of(sampled, kind, spec.alpha, spec.katz_a);
                const auto end = std::chrono::steady_clock::now();
                ExperimentCell& cell = cells[i];
                cell.depth = t.depth;
                cell.sample_idx = t.idx;
                cell.sae_value = sae(originals[t.kind_i], score);
                cell.mae_value = mae(originals[t.kind_i], score);
                cell.jaccard = jaccard_diversity(g, sampled);
                cell.bound_worstcase = worstcase_pr_bound(spec.alpha, t.depth);
                cell.bound_adaptive = adaptive_by_depth[t.depth];
                cell.runtime_ms =
                    std::chrono::duration<double, std::milli>(end - start).count();
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const unsigned threads = std::min<unsigned>(
        detail::resolve_threads(spec.threads),
        static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<ExperimentResult> results(spec.kinds.size());
    for (std::size_t k = 0; k < spec.kinds.size(); ++k) results[k].kind = spec.kinds[k];
    for (std::size_t i = 0; i < tasks.size(); ++i)
        results[tasks[i].kind_i].cells.push_back(cells[i]);
    return results;
}

inline void write_experiment_csv(const ExperimentResult& r, const std::string& dir,
                                 bool runtime_column) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/experiment_" + kind_slug(r.kind) + ".csv";
    std::ofstream os(path);
    if (!os) throw error("cannot open '" + path + "' for writing");
    os << "depth,sample_idx,sae,mae,jaccard,bound_worstcase,bound_adaptive";
    if (runtime_column) os << ",runtime_ms";
    os << "\n";
    for (const auto& c : r.cells) {
        os << c.depth << "," << c.sample_idx << "," << detail::fmt_double(c.sae_value) << ","
           << detail::fmt_double(c.mae_value) << "," << detail::fmt_double(c.jaccard) << ","
           << detail::fmt_double(c.bound_worstcase) << "," << detail::fmt_double(c.bound_adaptive);
        if (runtime_column) os << "," << detail::fmt_ms(c.runtime_ms);
        os << "\n";
    }
    if (!os) throw error("write to '" + path + "' failed");
}

inline void write_experiment_summary_csv(const ExperimentResult& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/experiment_" + kind_slug(r.kind) + "_summary.csv";
    std::ofstream os(path);
    if (!os) throw error("cannot open '" + path + "' for writing");
    os << "depth,n_samples,median_sae,q16_sae,q84_sae,median_mae,q16_mae,q84_mae,"
          "median_jaccard,q16_jaccard,q84_jaccard\n";
    for (const auto& row : summarize(r)) {
        os << row.depth << "," << row.n_samples << "," << detail::fmt_double(row.median_sae) << ","
           << detail::fmt_double(row.q16_sae) << "," << detail::fmt_double(row.q84_sae) << ","
           << detail::fmt_double(row.median_mae) << "," << detail::fmt_double(row.q16_mae) << ","
           << detail::fmt_double(row.q84_mae) << "," << detail::fmt_double(row.median_jaccard) << ","
           << detail::fmt_double(row.q16_jaccard) << "," << detail::fmt_double(row.q84_jaccard)
           << "\n";
    }
    if (!os) throw error("write to '" + path + "' failed");
}

} // namespace nest
