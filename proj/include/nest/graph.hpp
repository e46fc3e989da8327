#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nest {

using NodeId = std::uint32_t;

// All recoverable failures (bad input files, invalid arguments, unmet
// preconditions) are reported through this type.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction { In, Out, Undirected };

struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple graph (no self-loops, no parallel edges), directed or undirected,
// nodes 0..n-1. Edges are kept in canonical sorted order and adjacency lists
// are sorted, so identical edge sets always produce identical objects.
class Graph {
public:
    Graph() = default;

    Graph(NodeId n, bool directed, std::vector<Edge> edges)
        : n_(n), directed_(directed), edges_(std::move(edges)) {
        for (auto& e : edges_) {
            if (e.u >= n_ || e.v >= n_)
                throw error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") references node >= n=" + std::to_string(n_));
            if (e.u == e.v)
                throw error("self-loop at node " + std::to_string(e.u));
            if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw error("duplicate edge in input");
        build_adjacency();
    }

    NodeId n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    bool directed() const { return directed_; }

    std::span<const Edge> edges() const { return edges_; }

    // Out-neighbors for directed graphs; all neighbors for undirected.
    std::span<const NodeId> out_neighbors(NodeId v) const {
        check_node(v);
        return out_[v];
    }

    std::span<const NodeId> in_neighbors(NodeId v) const {
        check_node(v);
        return directed_ ? std::span<const NodeId>(in_[v]) : std::span<const NodeId>(out_[v]);
    }

    std::span<const NodeId> neighbors(NodeId v) const { return out_neighbors(v); }

    std::size_t out_degree(NodeId v) const { return out_neighbors(v).size(); }
    std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }

    // Checked degree query; the direction must match the graph's directedness.
    std::size_t degree(NodeId v, Direction dir) const {
        check_node(v);
        if (directed_) {
            if (dir == Direction::Undirected)
                throw error("undirected degree queried on a directed graph");
            return dir == Direction::Out ? out_[v].size() : in_[v].size();
        }
        if (dir != Direction::Undirected)
            throw error("in/out degree queried on an undirected graph");
        return out_[v].size();
    }

    // Membership in O(log deg). Orientation matters for directed graphs only.
    bool has_edge(NodeId u, NodeId v) const {
        check_node(u);
        check_node(v);
        const auto& nb = out_[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.directed_ == b.directed_ && a.edges_ == b.edges_;
    }

private:
    void build_adjacency() {
        out_.assign(n_, {});
        if (directed_) in_.assign(n_, {});
        for (const auto& e : edges_) {
            out_[e.u].push_back(e.v);
            if (directed_)
                in_[e.v].push_back(e.u);
            else
                out_[e.v].push_back(e.u);
        }
        for (auto& nb : out_) std::sort(nb.begin(), nb.end());
        for (auto& nb : in_) std::sort(nb.begin(), nb.end());
    }

    void check_node(NodeId v) const {
        if (v >= n_) throw error("node " + std::to_string(v) + " out of range (n=" + std::to_string(n_) + ")");
    }

    NodeId n_ = 0;
    bool directed_ = false;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_; // directed only
};

struct LoadOptions {
    bool directed = false;
    // Node count; if negative, inferred as 1 + max node id (0 for an empty file).
    std::int64_t n_override = -1;
    // Input hygiene: by default duplicate edges and self-loops are errors.
    bool dedup = false;
    bool strip_self_loops = false;
};

// Reads a whitespace-separated edge list, one "u v" pair per line. Lines that
// are blank or start with '#' are skipped. Node ids must be non-negative
// integers.
inline Graph load_edge_list(std::istream& is, const LoadOptions& opt = {}) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    long long max_id = -1;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u >> v))
            throw error("line " + std::to_string(lineno) + ": expected two node ids, got '" + line + "'");
        std::string trailing;
        if (ls >> trailing)
            throw error("line " + std::to_string(lineno) + ": trailing token '" + trailing + "'");
        if (u < 0 || v < 0)
            throw error("line " + std::to_string(lineno) + ": negative node id");
        max_id = std::max({max_id, u, v}); // a stripped self-loop still names its node
        if (u == v) {
            if (opt.strip_self_loops) continue;
            throw error("line " + std::to_string(lineno) + ": self-loop at node " + std::to_string(u));
        }
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    if (opt.dedup) {
        for (auto& e : edges)
            if (!opt.directed && e.u > e.v) std::swap(e.u, e.v);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    const std::int64_t n = opt.n_override >= 0 ? opt.n_override : max_id + 1;
    if (max_id >= n)
        throw error("node id " + std::to_string(max_id) + " exceeds declared n=" + std::to_string(n));
    return Graph(static_cast<NodeId>(n), opt.directed, std::move(edges));
}

inline Graph load_edge_list_file(const std::string& path, const LoadOptions& opt = {}) {
    std::ifstream is(path);
    if (!is) throw error("cannot open '" + path + "' for reading");
    try {
        return load_edge_list(is, opt);
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

// Writes the canonical edge list: a '#' header with basic counts, then one
// sorted "u v" line per edge. Loading the result reproduces the graph.
inline void save_edge_list(std::ostream& os, const Graph& g) {
    os << "# n=" << g.n() << " m=" << g.m() << " directed=" << (g.directed() ? 1 : 0) << "\n";
    for (const auto& e : g.edges()) os << e.u << " " << e.v << "\n";
}

inline void save_edge_list_file(const std::string& path, const Graph& g) {
    std::ofstream os(path);
    if (!os) throw error("cannot open '" + path + "' for writing");
    save_edge_list(os, g);
    if (!os) throw error("write to '" + path + "' failed");
}

} // namespace nest
