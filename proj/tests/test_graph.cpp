#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

#include "nest/graph.hpp"
#include "nest/rng.hpp"
#include "support/gengraphs.hpp"

using namespace nest;
using Catch::Matchers::ContainsSubstring;

namespace {

Graph from_text(const std::string& text, LoadOptions opt = {}) {
    std::istringstream in(text);
    return load_edge_list(in, opt);
}

} // namespace

TEST_CASE("construction establishes the simple-graph invariants") {
    SECTION("triangle") {
        Graph g(3, false, {{0, 1}, {1, 2}, {2, 0}});
        REQUIRE(g.n() == 3);
        REQUIRE(g.m() == 3);
        REQUIRE_FALSE(g.directed());
        for (NodeId v = 0; v < 3; ++v) REQUIRE(g.degree(v, Direction::Undirected) == 2);
    }
    SECTION("undirected edges are canonicalized to u < v and sorted") {
        Graph g(4, false, {{3, 2}, {1, 0}, {2, 0}});
        std::vector<Edge> expect{{0, 1}, {0, 2}, {2, 3}};
        REQUIRE(std::equal(g.edges().begin(), g.edges().end(), expect.begin(), expect.end()));
    }
    SECTION("self-loop rejected") {
        REQUIRE_THROWS_AS(Graph(3, false, {{1, 1}}), error);
    }
    SECTION("out-of-range endpoint rejected") {
        REQUIRE_THROWS_AS(Graph(2, true, {{0, 2}}), error);
    }
    SECTION("duplicate edges rejected, including reversed undirected pairs") {
        REQUIRE_THROWS_AS(Graph(3, false, {{0, 1}, {1, 0}}), error);
        REQUIRE_THROWS_AS(Graph(3, true, {{0, 1}, {0, 1}}), error);
        REQUIRE_NOTHROW(Graph(3, true, {{0, 1}, {1, 0}})); // a 2-cycle is two distinct arcs
    }
    SECTION("empty and edgeless graphs are fine") {
        Graph g(5, true, {});
        REQUIRE(g.n() == 5);
        REQUIRE(g.m() == 0);
        Graph h(0, false, {});
        REQUIRE(h.n() == 0);
    }
}

TEST_CASE("degree queries") {
    Graph tri(3, false, {{0, 1}, {1, 2}, {2, 0}});
    Graph cyc(2, true, {{0, 1}, {1, 0}});
    Graph star(4, false, {{0, 1}, {0, 2}, {0, 3}});

    REQUIRE(tri.degree(0, Direction::Undirected) == 2);
    REQUIRE(cyc.degree(0, Direction::In) == 1);
    REQUIRE(cyc.degree(0, Direction::Out) == 1);
    REQUIRE(star.degree(0, Direction::Undirected) == 3);
    REQUIRE(star.degree(1, Direction::Undirected) == 1);

    SECTION("direction must match directedness") {
        REQUIRE_THROWS_AS(tri.degree(0, Direction::In), error);
        REQUIRE_THROWS_AS(tri.degree(0, Direction::Out), error);
        REQUIRE_THROWS_AS(cyc.degree(0, Direction::Undirected), error);
    }
    SECTION("node must be in range") {
        REQUIRE_THROWS_AS(tri.degree(3, Direction::Undirected), error);
    }
}

TEST_CASE("edge membership") {
    Graph tri(3, false, {{0, 1}, {1, 2}, {2, 0}});
    REQUIRE(tri.has_edge(0, 1));
    REQUIRE(tri.has_edge(1, 0)); // unordered for undirected graphs
    REQUIRE_FALSE(tri.has_edge(0, 0));

    Graph oneway(2, true, {{1, 0}});
    REQUIRE_FALSE(oneway.has_edge(0, 1));
    REQUIRE(oneway.has_edge(1, 0));

    REQUIRE_THROWS_AS(tri.has_edge(0, 5), error);
}

TEST_CASE("edge-list parsing") {
    SECTION("triangle text") {
        Graph g = from_text("0 1\n1 2\n2 0\n");
        REQUIRE(g.n() == 3);
        REQUIRE(g.m() == 3);
    }
    SECTION("directed 2-cycle") {
        LoadOptions opt;
        opt.directed = true;
        Graph g = from_text("0 1\n1 0\n", opt);
        REQUIRE(g.n() == 2);
        REQUIRE(g.m() == 2);
    }
    SECTION("comments and blank lines are skipped") {
        Graph g = from_text("# header\n\n0 1\n# tail comment\n1 2\n");
        REQUIRE(g.m() == 2);
    }
    SECTION("self-loop is an error with the line number") {
        REQUIRE_THROWS_WITH(from_text("0 1\n2 2\n"), ContainsSubstring("line 2"));
    }
    SECTION("malformed lines") {
        REQUIRE_THROWS_WITH(from_text("0\n"), ContainsSubstring("line 1"));
        REQUIRE_THROWS_WITH(from_text("0 1 7\n"), ContainsSubstring("line 1"));
        REQUIRE_THROWS_AS(from_text("a b\n"), error);
        REQUIRE_THROWS_AS(from_text("-1 2\n"), error);
    }
    SECTION("duplicate undirected lines error without the dedup flag") {
        REQUIRE_THROWS_AS(from_text("0 1\n1 0\n"), error);
        LoadOptions opt;
        opt.dedup = true;
        Graph g = from_text("0 1\n1 0\n0 1\n", opt);
        REQUIRE(g.m() == 1);
    }
    SECTION("node count can be overridden for trailing isolated nodes") {
        LoadOptions opt;
        opt.n_override = 6;
        Graph g = from_text("0 1\n", opt);
        REQUIRE(g.n() == 6);
        REQUIRE(g.degree(5, Direction::Undirected) == 0);

        LoadOptions bad;
        bad.n_override = 2;
        REQUIRE_THROWS_WITH(from_text("0 5\n", bad), ContainsSubstring("exceeds"));
    }
    SECTION("self-loops can be stripped by flag") {
        LoadOptions opt;
        opt.strip_self_loops = true;
        Graph g = from_text("0 0\n0 1\n3 3\n1 2\n", opt);
        REQUIRE(g.m() == 2);
        REQUIRE(g.n() == 4);
    }
}

TEST_CASE("serialization round-trips and is line-order independent") {
    auto pool = testsupport::random_pool(12, 2, 40, 2024);
    for (const Graph& g : pool) {
        std::ostringstream out;
        save_edge_list(out, g);
        std::istringstream in(out.str());
        LoadOptions opt;
        opt.directed = g.directed();
        opt.n_override = static_cast<std::int64_t>(g.n());
        Graph back = load_edge_list(in, opt);
        REQUIRE(back == g);
    }

    // permuting the input lines does not change the loaded graph
    Graph a = from_text("2 3\n0 1\n1 2\n");
    Graph b = from_text("0 1\n1 2\n2 3\n");
    REQUIRE(a == b);

    // the writer emits a descriptive header
    std::ostringstream out;
    save_edge_list(out, Graph(3, false, {{0, 1}, {1, 2}, {2, 0}}));
    REQUIRE_THAT(out.str(), ContainsSubstring("# n=3 m=3 directed=0"));
}

TEST_CASE("degree sums match the handshake identities") {
    auto pool = testsupport::random_pool(16, 2, 60, 7);
    for (const Graph& g : pool) {
        if (g.directed()) {
            std::uint64_t in_sum = 0, out_sum = 0;
            for (NodeId v = 0; v < g.n(); ++v) {
                in_sum += g.degree(v, Direction::In);
                out_sum += g.degree(v, Direction::Out);
            }
            REQUIRE(in_sum == g.m());
            REQUIRE(out_sum == g.m());
        } else {
            std::uint64_t sum = 0;
            for (NodeId v = 0; v < g.n(); ++v) sum += g.degree(v, Direction::Undirected);
            REQUIRE(sum == 2 * g.m());
        }
    }
}

TEST_CASE("has_edge agrees with a linear scan of the edge sequence") {
    auto pool = testsupport::random_pool(6, 3, 50, 99);
    for (const Graph& g : pool) {
        Rng rng(derive_seed(5150, {g.n(), g.m()}));
        for (int q = 0; q < 1000; ++q) {
            const NodeId u = static_cast<NodeId>(rng.below(g.n()));
            const NodeId v = static_cast<NodeId>(rng.below(g.n()));
            bool scan = false;
            for (const Edge& e : g.edges()) {
                if (e.u == u && e.v == v) scan = true;
                if (!g.directed() && e.u == v && e.v == u) scan = true;
            }
            REQUIRE(g.has_edge(u, v) == scan);
        }
    }
}

TEST_CASE("adjacency index matches the edge sequence") {
    auto pool = testsupport::random_pool(8, 2, 30, 31337);
    for (const Graph& g : pool) {
        std::vector<std::vector<NodeId>> out(g.n()), in(g.n());
        for (const Edge& e : g.edges()) {
            out[e.u].push_back(e.v);
            in[e.v].push_back(e.u);
            if (!g.directed()) {
                out[e.v].push_back(e.u);
                in[e.u].push_back(e.v);
            }
        }
        for (NodeId v = 0; v < g.n(); ++v) {
            std::sort(out[v].begin(), out[v].end());
            std::sort(in[v].begin(), in[v].end());
            auto ospan = g.out_neighbors(v);
            auto ispan = g.in_neighbors(v);
            REQUIRE(std::equal(ospan.begin(), ospan.end(), out[v].begin(), out[v].end()));
            REQUIRE(std::equal(ispan.begin(), ispan.end(), in[v].begin(), in[v].end()));
        }
    }
}
