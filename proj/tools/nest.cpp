// Command-line front end: refine colorings, draw null-model samples, score
// centralities, audit samples against the originals they were drawn from, run
// baseline generators, and batch the whole comparison experiment.
//
// Exit codes: 0 success (and all checks passed), 1 a requested check failed,
// 2 operational error (bad arguments, unreadable files, invalid parameters).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nest/analysis.hpp"
#include "nest/baselines.hpp"
#include "nest/centrality.hpp"
#include "nest/experiment.hpp"
#include "nest/graph.hpp"
#include "nest/refinement.hpp"
#include "nest/sampler.hpp"

using nest::error;
using nest::Graph;
using json = nlohmann::ordered_json;

namespace {

struct GraphOptions {
    std::string path;
    bool directed = false;
    std::int64_t n_override = -1;
    bool dedup = false;
    bool strip_self_loops = false;
};

void add_graph_options(CLI::App* cmd, GraphOptions& o, const std::string& flag = "--input") {
    cmd->add_option(flag + ",-i", o.path, "edge list file (one 'u v' pair per line)")
        ->required();
    cmd->add_flag("--directed", o.directed, "treat edges as ordered pairs");
    cmd->add_option("--n", o.n_override, "node count override (default: 1 + max node id)");
    cmd->add_flag("--dedup", o.dedup, "drop duplicate edges instead of failing");
    cmd->add_flag("--strip-self-loops", o.strip_self_loops,
                  "drop self-loops instead of failing");
}

Graph load_graph(const GraphOptions& o) {
    nest::LoadOptions opt;
    opt.directed = o.directed;
    opt.n_override = o.n_override;
    opt.dedup = o.dedup;
    opt.strip_self_loops = o.strip_self_loops;
    return nest::load_edge_list_file(o.path, opt);
}

nest::ColorInit parse_init(const std::string& s) {
    if (s.empty() || s == "const") return nest::ColorInit::constant();
    if (s == "outdeg") return nest::ColorInit::out_degree();
    if (s.rfind("file:", 0) == 0) {
        const std::string path = s.substr(5);
        std::ifstream is(path);
        if (!is) throw error("cannot open color file '" + path + "'");
        std::vector<nest::ColorId> colors;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            try {
                const long long v = std::stoll(line);
                if (v < 0) throw error("negative color");
                colors.push_back(static_cast<nest::ColorId>(v));
            } catch (const std::exception&) {
                throw error(path + " line " + std::to_string(lineno) +
                            ": expected one nonnegative integer color");
            }
        }
        return nest::ColorInit::from_colors(std::move(colors));
    }
    throw error("unknown initial coloring '" + s + "' (use const, outdeg, or file:PATH)");
}

nest::RefineMode parse_mode(const std::string& s, bool directed) {
    if (s.empty() || s == "auto") return directed ? nest::RefineMode::Both
                                                  : nest::RefineMode::Undirected;
    if (s == "in") return nest::RefineMode::In;
    if (s == "out") return nest::RefineMode::Out;
    if (s == "both") return nest::RefineMode::Both;
    if (s == "undirected") return nest::RefineMode::Undirected;
    if (s == "gram") return nest::RefineMode::Gram;
    throw error("unknown mode '" + s + "' (use in, out, both, undirected, gram, or auto)");
}

const char* mode_slug(nest::RefineMode m) {
    switch (m) {
        case nest::RefineMode::In: return "in";
        case nest::RefineMode::Out: return "out";
        case nest::RefineMode::Both: return "both";
        case nest::RefineMode::Undirected: return "undirected";
        case nest::RefineMode::Gram: return "gram";
    }
    return "?";
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- refine ----

struct RefineArgs {
    GraphOptions graph;
    std::string init = "const";
    std::string mode = "auto";
    std::int64_t depth = -1; // negative: refine until stable
    std::string out_dir;
    bool as_json = false;
};

int run_refine(const RefineArgs& a) {
    const Graph g = load_graph(a.graph);
    const nest::RefineMode mode = parse_mode(a.mode, g.directed());
    const nest::Coloring c0 = nest::initial_coloring(g, parse_init(a.init));
    const nest::RefinementHistory h =
        a.depth < 0 ? nest::refine(g, c0, mode, nest::UntilStable{})
                    : nest::refine(g, c0, mode, static_cast<std::uint32_t>(a.depth));

    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        for (std::uint32_t t = 0; t <= h.max_depth(); ++t) {
            const std::string path =
                a.out_dir + "/colors_depth_" + std::to_string(t) + ".txt";
            std::ofstream os(path);
            if (!os) throw error("cannot open '" + path + "' for writing");
            for (nest::ColorId c : h.at(t).colors) os << c << "\n";
            if (!os) throw error("write to '" + path + "' failed");
        }
    }

    if (a.as_json) {
        json out;
        out["n"] = g.n();
        out["m"] = g.m();
        out["directed"] = g.directed();
        out["mode"] = mode_slug(mode);
        out["max_depth"] = h.max_depth();
        json ks = json::array();
        for (const auto& c : h.colorings) ks.push_back(c.k);
        out["k"] = ks;
        if (h.stable_depth)
            out["stable_depth"] = *h.stable_depth;
        else
            out["stable_depth"] = nullptr;
        std::cout << out.dump(2) << "\n";
    } else {
        for (std::uint32_t t = 0; t <= h.max_depth(); ++t)
            std::cout << "depth " << t << ": " << h.at(t).k << " classes\n";
        if (h.stable_depth)
            std::cout << "stable at depth " << *h.stable_depth << "\n";
        else
            std::cout << "not stable within depth " << h.max_depth() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- sample ----

struct SampleArgs {
    GraphOptions graph;
    std::string init = "const";
    std::string mode = "auto";
    std::uint32_t depth = 1;
    std::string alg = "subgraph";
    std::string block_choice = "uniform";
    double rate = 10.0;
    std::int64_t steps = -1;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
    std::string stats_path;
};

int run_sample(const SampleArgs& a) {
    const Graph g = load_graph(a.graph);
    nest::SamplerConfig cfg;
    cfg.depth = a.depth;
    cfg.init = parse_init(a.init);
    cfg.mode = parse_mode(a.mode, g.directed());
    cfg.swap_rate = a.rate;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    if (a.alg == "subgraph") {
        cfg.algorithm = nest::SamplerConfig::Algorithm::PerSubgraph;
    } else if (a.alg == "global") {
        cfg.algorithm = nest::SamplerConfig::Algorithm::GlobalRandom;
    } else {
        throw error("unknown algorithm '" + a.alg + "' (use subgraph or global)");
    }
    if (a.block_choice == "uniform") {
        cfg.block_choice = nest::SamplerConfig::BlockChoice::Uniform;
    } else if (a.block_choice == "edges") {
        cfg.block_choice = nest::SamplerConfig::BlockChoice::EdgeProportional;
    } else {
        throw error("unknown block choice '" + a.block_choice + "' (use uniform or edges)");
    }
    if (a.steps >= 0) cfg.total_steps = static_cast<std::uint64_t>(a.steps);

    const auto [sampled, stats] = nest::sample(g, cfg);
    nest::save_edge_list_file(a.out, sampled);

    if (!a.stats_path.empty()) {
        json out;
        out["total_attempts"] = stats.total_attempts();
        out["total_accepted"] = stats.total_accepted();
        json blocks = json::array();
        for (const auto& b : stats.blocks) {
            json jb;
            jb["ci"] = b.ci;
            jb["cj"] = b.cj;
            jb["edges"] = b.edges;
            jb["attempts"] = b.attempts;
            jb["accepted_swaps"] = b.accepted_swaps;
            jb["rejected"] = b.rejected;
            jb["triangle_attempts"] = b.triangle_attempts;
            jb["accepted_triangles"] = b.accepted_triangles;
            blocks.push_back(jb);
        }
        out["blocks"] = blocks;
        std::ofstream os(a.stats_path);
        if (!os) throw error("cannot open '" + a.stats_path + "' for writing");
        os << out.dump(2) << "\n";
        if (!os) throw error("write to '" + a.stats_path + "' failed");
    }

    std::cout << "wrote " << a.out << " (" << stats.total_accepted() << " of "
              << stats.total_attempts() << " moves accepted)\n";
    return 0;
}

// ------------------------------------------------------------ centrality ----

struct CentralityArgs {
    GraphOptions graph;
    std::string kind = "pr";
    double alpha = nest::kDefaultAlpha;
    double attenuation = -1.0; // negative: use the library default
    double tol = nest::kDefaultTol;
    std::size_t max_iter = nest::kDefaultMaxIter;
    std::string out;
    std::string meta_path;
    std::string trace_path;
};

int run_centrality(const CentralityArgs& a) {
    const Graph g = load_graph(a.graph);
    const auto kind = nest::kind_from_slug(a.kind);
    if (!kind) throw error("unknown centrality '" + a.kind + "' (use pr, ev, katz, auth, hub)");
    if (!a.trace_path.empty() && *kind != nest::CentralityKind::PageRank)
        throw error("--trace records the iteration path and is available for pr only");

    nest::CentralityVector scores;
    nest::IterationTrace trace;
    switch (*kind) {
        case nest::CentralityKind::PageRank:
            scores = nest::pagerank(g, a.alpha, a.tol, a.max_iter,
                                    a.trace_path.empty() ? nullptr : &trace);
            break;
        case nest::CentralityKind::Eigenvector:
            scores = nest::eigenvector_centrality(g, a.tol, a.max_iter);
            break;
        case nest::CentralityKind::Katz: {
            std::optional<double> att;
            if (a.attenuation >= 0.0) att = a.attenuation;
            scores = nest::katz(g, att, a.tol, a.max_iter);
            break;
        }
        case nest::CentralityKind::Authority:
            scores = nest::hits(g, a.tol, a.max_iter).first;
            break;
        case nest::CentralityKind::Hub:
            scores = nest::hits(g, a.tol, a.max_iter).second;
            break;
    }

    if (a.out.empty()) {
        for (double v : scores.values) std::cout << fmt17(v) << "\n";
    } else {
        std::ofstream os(a.out);
        if (!os) throw error("cannot open '" + a.out + "' for writing");
        for (double v : scores.values) os << fmt17(v) << "\n";
        if (!os) throw error("write to '" + a.out + "' failed");

        json meta;
        meta["kind"] = nest::kind_slug(scores.kind);
        meta["n"] = g.n();
        meta["m"] = g.m();
        meta["iterations"] = scores.iterations_used;
        meta["residual"] = scores.residual;
        switch (scores.norm) {
            case nest::VectorNorm::One: meta["norm"] = "one"; break;
            case nest::VectorNorm::Two: meta["norm"] = "two"; break;
            case nest::VectorNorm::Raw: meta["norm"] = "raw"; break;
        }
        if (*kind == nest::CentralityKind::PageRank) meta["alpha"] = a.alpha;
        if (*kind == nest::CentralityKind::Katz)
            meta["attenuation"] =
                a.attenuation >= 0.0 ? a.attenuation
                                     : 0.5 / nest::spectral_radius_estimate(g);
        const std::string meta_path = a.meta_path.empty() ? a.out + ".meta.json" : a.meta_path;
        std::ofstream ms(meta_path);
        if (!ms) throw error("cannot open '" + meta_path + "' for writing");
        ms << meta.dump(2) << "\n";
        if (!ms) throw error("write to '" + meta_path + "' failed");
        std::cout << "wrote " << a.out << " and " << meta_path << "\n";
    }

    if (!a.trace_path.empty()) {
        std::ofstream ts(a.trace_path);
        if (!ts) throw error("cannot open '" + a.trace_path + "' for writing");
        for (const auto& it : trace.iterates) {
            for (std::size_t i = 0; i < it.size(); ++i)
                ts << (i ? " " : "") << fmt17(it[i]);
            ts << "\n";
        }
        if (!ts) throw error("write to '" + a.trace_path + "' failed");
    }
    return 0;
}

// --------------------------------------------------------------- compare ----

struct CompareArgs {
    GraphOptions original; // --original; shares the load flags with the sample
    std::string sample_path;
    std::uint32_t depth = 1;
    std::string init = "const";
    std::string mode = "auto";
    double alpha = nest::kDefaultAlpha;
    bool as_json = false;
};

json report_json(const nest::ComparisonReport& rep) {
    json out;
    out["sae"] = rep.sae;
    out["mae"] = rep.mae;
    out["jaccard_diversity"] = rep.jaccard_diversity;
    out["bound_worstcase"] = rep.bound_worstcase;
    out["bound_adaptive"] = rep.bound_adaptive;
    out["colors_preserved_to_depth"] = rep.colors_preserved_to_depth;
    out["preserved_at_every_depth"] = rep.preserved_at_every_depth;
    out["colors_pass"] = rep.colors_pass;
    out["bounds_checked"] = rep.bounds_checked;
    out["bounds_pass"] = rep.bounds_pass;
    out["pass"] = rep.pass;
    return out;
}

int run_compare(const CompareArgs& a) {
    const Graph g = load_graph(a.original);
    GraphOptions sample_opts = a.original;
    sample_opts.path = a.sample_path;
    const Graph s = load_graph(sample_opts);
    const nest::ComparisonReport rep =
        nest::audit_sample(g, s, a.depth, parse_init(a.init),
                           parse_mode(a.mode, g.directed()), a.alpha);
    if (a.as_json) {
        std::cout << report_json(rep).dump(2) << "\n";
    } else {
        std::cout << "colors preserved to depth " << rep.colors_preserved_to_depth
                  << (rep.preserved_at_every_depth ? " (all depths)" : "") << ", required "
                  << a.depth << ": " << (rep.colors_pass ? "ok" : "MISMATCH") << "\n";
        std::cout << "pagerank sae " << fmt17(rep.sae) << ", mae " << fmt17(rep.mae) << "\n";
        std::cout << "edge diversity " << fmt17(rep.jaccard_diversity) << "\n";
        if (rep.bounds_checked)
            std::cout << "bounds: worstcase " << fmt17(rep.bound_worstcase) << ", adaptive "
                      << fmt17(rep.bound_adaptive) << ": "
                      << (rep.bounds_pass ? "ok" : "EXCEEDED") << "\n";
        else
            std::cout << "bounds: not applicable for this start/mode\n";
        std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    return rep.pass ? 0 : 1;
}

// -------------------------------------------------------------- baseline ----

struct BaselineArgs {
    GraphOptions graph;
    std::string model; // er | cm | ergm
    std::vector<double> thetas = {1.0};
    std::uint64_t steps = 1000;
    double rate = 10.0;
    std::uint64_t seed = 0;
    double alpha = nest::kDefaultAlpha;
    std::string out;
};

std::string theta_path(const std::string& base, double theta) {
    const std::filesystem::path p(base);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", theta);
    std::filesystem::path out = p.parent_path() / p.stem();
    out += std::string("_theta_") + buf;
    out += p.extension();
    return out.string();
}

int run_baseline(const BaselineArgs& a) {
    const Graph g = load_graph(a.graph);
    if (a.model == "er") {
        nest::save_edge_list_file(a.out, nest::erdos_renyi(g.n(), g.m(), g.directed(), a.seed));
        std::cout << "wrote " << a.out << "\n";
    } else if (a.model == "cm") {
        nest::save_edge_list_file(a.out, nest::configuration_model(g, a.seed, a.rate));
        std::cout << "wrote " << a.out << "\n";
    } else if (a.model == "ergm") {
        if (a.thetas.empty()) throw error("ergm needs at least one theta");
        for (std::size_t i = 0; i < a.thetas.size(); ++i) {
            nest::ErgmConfig cfg;
            cfg.theta = a.thetas[i];
            cfg.steps = a.steps;
            cfg.seed = nest::derive_seed(a.seed, {i});
            cfg.alpha = a.alpha;
            const std::string path =
                a.thetas.size() == 1 ? a.out : theta_path(a.out, a.thetas[i]);
            nest::save_edge_list_file(path, nest::ergm_pagerank(g, cfg));
            std::cout << "wrote " << path << " (theta " << a.thetas[i] << ")\n";
        }
    } else {
        throw error("unknown model '" + a.model + "' (use er, cm, or ergm)");
    }
    return 0;
}

// ------------------------------------------------------------ experiment ----

struct ExperimentArgs {
    GraphOptions graph;
    std::vector<std::string> kinds = {"pr"};
    std::uint32_t depth_min = 1;
    std::uint32_t depth_max = 3;
    std::uint32_t samples = 100;
    std::uint64_t seed = 0;
    std::string out_dir;
    double alpha = nest::kDefaultAlpha;
    double attenuation = -1.0;
    double rate = 10.0;
    std::string alg = "subgraph";
    unsigned threads = 0;
    bool no_runtimes = false;
};

int run_exp(const ExperimentArgs& a) {
    const Graph g = load_graph(a.graph);
    nest::ExperimentSpec spec;
    spec.graph_path = a.graph.path;
    spec.directed = g.directed();
    spec.kinds.clear();
    for (const std::string& s : a.kinds) {
        const auto k = nest::kind_from_slug(s);
        if (!k) throw error("unknown centrality '" + s + "' (use pr, ev, katz, auth, hub)");
        spec.kinds.push_back(*k);
    }
    spec.depth_min = a.depth_min;
    spec.depth_max = a.depth_max;
    spec.samples = a.samples;
    spec.seed = a.seed;
    spec.out_dir = a.out_dir;
    spec.alpha = a.alpha;
    if (a.attenuation >= 0.0) spec.katz_a = a.attenuation;
    spec.swap_rate = a.rate;
    if (a.alg == "subgraph") {
        spec.algorithm = nest::SamplerConfig::Algorithm::PerSubgraph;
    } else if (a.alg == "global") {
        spec.algorithm = nest::SamplerConfig::Algorithm::GlobalRandom;
    } else {
        throw error("unknown algorithm '" + a.alg + "' (use subgraph or global)");
    }
    spec.threads = a.threads;
    spec.runtime_column = !a.no_runtimes;

    const auto results = nest::run_experiment(g, spec);
    for (const auto& r : results) {
        nest::write_experiment_csv(r, a.out_dir, spec.runtime_column);
        nest::write_experiment_summary_csv(r, a.out_dir);
        std::cout << nest::kind_slug(r.kind) << ":";
        for (const auto& row : nest::summarize(r))
            std::cout << "  d" << row.depth << " median_sae " << fmt17(row.median_sae);
        std::cout << "\n";
    }
    std::cout << "wrote " << 2 * results.size() << " files under " << a.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------- verify ----

struct VerifyArgs {
    GraphOptions original;
    std::string sample_path;
    std::uint32_t depth = 1;
    std::string init = "const";
    std::string mode = "auto";
    double alpha = nest::kDefaultAlpha;
};

int run_verify(const VerifyArgs& a) {
    const Graph g = load_graph(a.original);
    GraphOptions sample_opts = a.original;
    sample_opts.path = a.sample_path;
    const Graph s = load_graph(sample_opts);
    const nest::ColorInit init = parse_init(a.init);
    const nest::RefineMode mode = parse_mode(a.mode, g.directed());
    const nest::ComparisonReport rep = nest::audit_sample(g, s, a.depth, init, mode, a.alpha);

    bool any_fail = false;
    const auto verdict = [&](bool ok) -> const char* {
        if (!ok) any_fail = true;
        return ok ? "PASS" : "FAIL";
    };

    std::cout << "CHECK colors preserved to depth " << a.depth << ": "
              << verdict(rep.colors_pass) << " (matched to depth "
              << rep.colors_preserved_to_depth
              << (rep.preserved_at_every_depth ? ", stable partitions identical" : "") << ")\n";

    if (rep.bounds_checked) {
        std::cout << "CHECK pagerank error within bounds: " << verdict(rep.bounds_pass)
                  << " (sae " << fmt17(rep.sae) << ", worstcase " << fmt17(rep.bound_worstcase)
                  << ", adaptive " << fmt17(rep.bound_adaptive) << ")\n";
    } else {
        std::cout << "CHECK pagerank error within bounds: N/A (the bounds assume an "
                     "out-degree-refining start aggregated over in-neighbors)\n";
    }

    const nest::Coloring c0 = nest::initial_coloring(g, init);
    if (nest::detail::pr_bound_hypotheses(g, c0, mode)) {
        const auto tg = nest::power_iterates(g, nest::PowerKind::pagerank_kind(a.alpha), a.depth,
                                             nest::uniform_start(g));
        const auto ts = nest::power_iterates(s, nest::PowerKind::pagerank_kind(a.alpha), a.depth,
                                             nest::uniform_start(s));
        double worst = 0.0;
        for (std::uint32_t t = 0; t <= a.depth; ++t)
            worst = std::max(worst, nest::sae(tg.iterates[t], ts.iterates[t]));
        std::cout << "CHECK pagerank iterates agree through depth " << a.depth << ": "
                  << verdict(worst <= 1e-12) << " (max deviation " << fmt17(worst) << ")\n";
    } else {
        std::cout << "CHECK pagerank iterates agree through depth " << a.depth
                  << ": N/A (needs an out-degree-refining start aggregated over "
                     "in-neighbors)\n";
    }

    return any_fail ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"null models that preserve iterated neighborhood structure"};
    app.require_subcommand(1);

    RefineArgs refine_args;
    CLI::App* c_refine = app.add_subcommand("refine", "run color refinement and report classes");
    add_graph_options(c_refine, refine_args.graph);
    c_refine->add_option("--init", refine_args.init, "initial colors: const, outdeg, file:PATH");
    c_refine->add_option("--mode", refine_args.mode,
                         "neighbor aggregation: in, out, both, undirected, gram, auto");
    c_refine->add_option("--depth", refine_args.depth, "refinement depth (default: until stable)");
    c_refine->add_option("--out-dir", refine_args.out_dir, "write per-depth color files here");
    c_refine->add_flag("--json", refine_args.as_json, "print a JSON summary");

    SampleArgs sample_args;
    CLI::App* c_sample = app.add_subcommand("sample", "draw one null-model sample");
    add_graph_options(c_sample, sample_args.graph);
    c_sample->add_option("--depth", sample_args.depth, "matched neighborhood depth (>= 1)");
    c_sample->add_option("--init", sample_args.init, "initial colors: const, outdeg, file:PATH");
    c_sample->add_option("--mode", sample_args.mode, "neighbor aggregation");
    c_sample->add_option("--alg", sample_args.alg, "subgraph (default) or global");
    c_sample->add_option("--block-choice", sample_args.block_choice,
                         "global walk block choice: uniform or edges");
    c_sample->add_option("--rate", sample_args.rate, "switch attempts per block edge");
    c_sample->add_option("--steps", sample_args.steps, "global walk steps (default 2|E|)");
    c_sample->add_option("--seed", sample_args.seed, "random seed");
    c_sample->add_option("--threads", sample_args.threads, "worker threads (0: NEST_THREADS/auto)");
    c_sample->add_option("--out,-o", sample_args.out, "output edge list")->required();
    c_sample->add_option("--stats", sample_args.stats_path, "write move statistics JSON here");

    CentralityArgs cent_args;
    CLI::App* c_cent = app.add_subcommand("centrality", "score nodes on one graph");
    add_graph_options(c_cent, cent_args.graph);
    c_cent->add_option("--kind", cent_args.kind, "pr, ev, katz, auth, or hub")->required();
    c_cent->add_option("--alpha", cent_args.alpha, "damping factor for pr");
    c_cent->add_option("--a", cent_args.attenuation, "attenuation for katz (default 0.5/radius)");
    c_cent->add_option("--tol", cent_args.tol, "convergence tolerance");
    c_cent->add_option("--max-iter", cent_args.max_iter, "iteration cap");
    c_cent->add_option("--out,-o", cent_args.out, "write scores here (default: stdout)");
    c_cent->add_option("--meta", cent_args.meta_path, "metadata path (default: OUT.meta.json)");
    c_cent->add_option("--trace", cent_args.trace_path, "write pr iterates here (pr only)");

    CompareArgs cmp_args;
    CLI::App* c_cmp = app.add_subcommand("compare", "audit a sample against its original");
    add_graph_options(c_cmp, cmp_args.original, "--original");
    c_cmp->add_option("--sample", cmp_args.sample_path, "sample edge list")->required();
    c_cmp->add_option("--depth", cmp_args.depth, "depth the sample should match");
    c_cmp->add_option("--init", cmp_args.init, "initial colors: const, outdeg, file:PATH");
    c_cmp->add_option("--mode", cmp_args.mode, "neighbor aggregation");
    c_cmp->add_option("--alpha", cmp_args.alpha, "damping factor");
    c_cmp->add_flag("--json", cmp_args.as_json, "print the report as JSON");

    BaselineArgs base_args;
    CLI::App* c_base = app.add_subcommand("baseline", "draw from a reference null model");
    add_graph_options(c_base, base_args.graph);
    c_base->add_option("--model", base_args.model, "er, cm, or ergm")->required();
    c_base->add_option("--theta", base_args.thetas, "ergm similarity strengths")->delimiter(',');
    c_base->add_option("--steps", base_args.steps, "ergm chain steps");
    c_base->add_option("--rate", base_args.rate, "cm switch attempts per edge");
    c_base->add_option("--seed", base_args.seed, "random seed");
    c_base->add_option("--alpha", base_args.alpha, "ergm damping factor");
    c_base->add_option("--out,-o", base_args.out, "output edge list")->required();

    ExperimentArgs exp_args;
    CLI::App* c_exp = app.add_subcommand("experiment", "run the depth-sweep comparison");
    add_graph_options(c_exp, exp_args.graph);
    c_exp->add_option("--kinds", exp_args.kinds, "centralities: pr,ev,katz,auth,hub")
        ->delimiter(',');
    c_exp->add_option("--depth-min", exp_args.depth_min, "smallest matched depth");
    c_exp->add_option("--depth-max", exp_args.depth_max, "largest matched depth");
    c_exp->add_option("--samples", exp_args.samples, "samples per depth");
    c_exp->add_option("--seed", exp_args.seed, "master seed");
    c_exp->add_option("--out-dir", exp_args.out_dir, "directory for CSV outputs")->required();
    c_exp->add_option("--alpha", exp_args.alpha, "damping factor");
    c_exp->add_option("--a", exp_args.attenuation, "katz attenuation");
    c_exp->add_option("--rate", exp_args.rate, "switch attempts per block edge");
    c_exp->add_option("--alg", exp_args.alg, "subgraph or global");
    c_exp->add_option("--threads", exp_args.threads, "worker threads (0: NEST_THREADS/auto)");
    c_exp->add_flag("--no-runtimes", exp_args.no_runtimes,
                    "omit the runtime column for byte-identical reruns");

    VerifyArgs ver_args;
    CLI::App* c_ver = app.add_subcommand("verify", "print PASS/FAIL checks for one sample");
    add_graph_options(c_ver, ver_args.original);
    c_ver->add_option("--sample", ver_args.sample_path, "sample edge list")->required();
    c_ver->add_option("--depth", ver_args.depth, "depth the sample should match");
    c_ver->add_option("--init", ver_args.init, "initial colors: const, outdeg, file:PATH");
    c_ver->add_option("--mode", ver_args.mode, "neighbor aggregation");
    c_ver->add_option("--alpha", ver_args.alpha, "damping factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_refine->parsed()) return run_refine(refine_args);
        if (c_sample->parsed()) return run_sample(sample_args);
        if (c_cent->parsed()) return run_centrality(cent_args);
        if (c_cmp->parsed()) return run_compare(cmp_args);
        if (c_base->parsed()) return run_baseline(base_args);
        if (c_exp->parsed()) return run_exp(exp_args);
        if (c_ver->parsed()) return run_verify(ver_args);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2; // no subcommand dispatched; require_subcommand should prevent this
}
