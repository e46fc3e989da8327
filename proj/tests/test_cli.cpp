// End-to-end tests for the command-line binary: every subcommand is driven
// through a shell the way a user would run it, and outputs are read back with
// the library's own loaders plus a JSON parser.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"
#include "nest/graph.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kCli = NEST_CLI_PATH;
const std::string kKarate = std::string(NEST_DATA_DIR) + "/karate.txt";

std::string q(const std::string& s) { return "'" + s + "'"; }

int run(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    if (WIFEXITED(rc)) return WEXITSTATUS(rc);
    return -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    REQUIRE(os);
    os << content;
}

std::size_t nonempty_lines(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t count = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++count;
    return count;
}

std::vector<double> parse_scores(const std::string& text) {
    std::istringstream is(text);
    std::vector<double> v;
    double x;
    while (is >> x) v.push_back(x);
    return v;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("nest_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Runs a command with stdout+stderr captured; returns {exit code, output}.
std::pair<int, std::string> run_captured(const TempDir& dir, const std::string& cmd) {
    const std::string cap = dir.file("capture.out");
    const int code = run(cmd + " > " + q(cap) + " 2>&1");
    return {code, slurp(cap)};
}

} // namespace

TEST_CASE("cli refine reports class counts and writes color files") {
    TempDir dir;
    const std::string c4 = dir.file("c4.txt");
    spit(c4, "0 1\n1 2\n2 3\n3 0\n");

    SECTION("a regular graph stays one class under the default start") {
        const auto [code, out] =
            run_captured(dir, kCli + " refine --input " + q(c4) + " --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["n"] == 4);
        CHECK(j["m"] == 4);
        CHECK(j["directed"] == false);
        CHECK(j["mode"] == "undirected");
        CHECK(j["k"] == json::array({1}));
        CHECK(j["stable_depth"] == 0);
    }

    SECTION("a path splits ends from the middle") {
        const std::string p3 = dir.file("p3.txt");
        spit(p3, "0 1\n1 2\n");
        const auto [code, out] =
            run_captured(dir, kCli + " refine --input " + q(p3) + " --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["k"] == json::array({1, 2}));
        CHECK(j["stable_depth"] == 1);
    }

    SECTION("the bundled club graph refines 1 -> 11 -> 27") {
        const auto [code, out] =
            run_captured(dir, kCli + " refine --input " + q(kKarate) + " --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["k"] == json::array({1, 11, 27}));
        CHECK(j["stable_depth"] == 2);
        CHECK(j["max_depth"] == 2);
    }

    SECTION("a degree start reaches the same stable partition one step sooner") {
        const auto [code, out] = run_captured(
            dir, kCli + " refine --input " + q(kKarate) + " --init outdeg --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["k"] == json::array({11, 27}));
        CHECK(j["stable_depth"] == 1);
    }

    SECTION("an explicit depth cap stops early and reports no stabilization") {
        const auto [code, out] = run_captured(
            dir, kCli + " refine --input " + q(kKarate) + " --depth 1 --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["k"] == json::array({1, 11}));
        CHECK(j["max_depth"] == 1);
        CHECK(j["stable_depth"].is_null());
    }

    SECTION("--out-dir writes one color file per recorded depth") {
        const std::string colors = dir.file("colors");
        REQUIRE(run(kCli + " refine --input " + q(kKarate) + " --out-dir " + q(colors) +
                    " > /dev/null") == 0);
        for (int t = 0; t <= 2; ++t) {
            const fs::path f = fs::path(colors) / ("colors_depth_" + std::to_string(t) + ".txt");
            REQUIRE(fs::exists(f));
            CHECK(nonempty_lines(slurp(f)) == 34);
        }
        // the depth-2 file round-trips as a custom start that is already stable
        const std::string depth2 = (fs::path(colors) / "colors_depth_2.txt").string();
        const auto [code, out] = run_captured(
            dir, kCli + " refine --input " + q(kKarate) + " --init file:" + depth2 + " --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["k"] == json::array({27}));
        CHECK(j["stable_depth"] == 0);
    }

    SECTION("--n pads the node count with isolated nodes") {
        const auto [code, out] =
            run_captured(dir, kCli + " refine --input " + q(c4) + " --n 6 --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["n"] == 6);
        CHECK(j["k"] == json::array({1, 2})); // isolates split from the cycle at depth 1
    }
}

TEST_CASE("cli sample is deterministic and reports move statistics") {
    TempDir dir;
    const std::string s1 = dir.file("s1.txt");
    const std::string s2 = dir.file("s2.txt");
    const std::string stats = dir.file("stats.json");

    REQUIRE(run(kCli + " sample --input " + q(kKarate) + " --depth 2 --seed 7 --out " +
                q(s1) + " --stats " + q(stats) + " > /dev/null") == 0);
    REQUIRE(run(kCli + " sample --input " + q(kKarate) + " --depth 2 --seed 7 --out " +
                q(s2) + " > /dev/null") == 0);
    CHECK(slurp(s1) == slurp(s2));

    const json st = json::parse(slurp(stats));
    CHECK(st["total_attempts"].get<long>() > 0);
    CHECK(st["blocks"].is_array());
    long attempts = 0, accepted = 0;
    for (const auto& b : st["blocks"]) {
        attempts += b["attempts"].get<long>() + b["triangle_attempts"].get<long>();
        accepted += b["accepted_swaps"].get<long>() + b["accepted_triangles"].get<long>();
    }
    CHECK(attempts == st["total_attempts"].get<long>());
    CHECK(accepted == st["total_accepted"].get<long>());

    SECTION("the sample passes its own audit") {
        CHECK(run(kCli + " compare --original " + q(kKarate) + " --sample " + q(s1) +
                  " --depth 2 > /dev/null") == 0);
    }

    SECTION("one unsplit class gets a pinned attempt budget") {
        const std::string stats1 = dir.file("stats1.json");
        REQUIRE(run(kCli + " sample --input " + q(kKarate) + " --depth 1 --seed 1 --out " +
                    q(dir.file("d1.txt")) + " --stats " + q(stats1) + " > /dev/null") == 0);
        const json st1 = json::parse(slurp(stats1));
        REQUIRE(st1["blocks"].size() == 1);
        CHECK(st1["blocks"][0]["edges"] == 78);
        CHECK(st1["blocks"][0]["attempts"] == 780); // ten switch attempts per edge
        CHECK(st1["blocks"][0]["triangle_attempts"] == 0);
    }
}

TEST_CASE("cli centrality writes scores, metadata, and iteration traces") {
    TempDir dir;

    SECTION("pagerank scores sum to one and carry metadata") {
        const std::string out = dir.file("pr.txt");
        REQUIRE(run(kCli + " centrality --input " + q(kKarate) + " --kind pr --out " + q(out) +
                    " > /dev/null") == 0);
        const auto scores = parse_scores(slurp(out));
        REQUIRE(scores.size() == 34);
        double sum = 0;
        for (double v : scores) sum += v;
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));

        const json meta = json::parse(slurp(out + ".meta.json"));
        CHECK(meta["kind"] == "pr");
        CHECK(meta["norm"] == "one");
        CHECK(meta["alpha"] == 0.85);
        CHECK(meta["n"] == 34);
        CHECK(meta["iterations"].get<long>() > 0);
        CHECK(meta["residual"].get<double>() < 1e-14);

        const std::string trace = dir.file("trace.txt");
        REQUIRE(run(kCli + " centrality --input " + q(kKarate) + " --kind pr --out " +
                    q(dir.file("pr2.txt")) + " --trace " + q(trace) + " > /dev/null") == 0);
        CHECK(nonempty_lines(slurp(trace)) ==
              static_cast<std::size_t>(meta["iterations"].get<long>()) + 1);
        std::istringstream first_row(slurp(trace));
        double first = 0;
        first_row >> first;
        CHECK(first == Catch::Approx(1.0 / 34.0).margin(1e-15)); // trace starts uniform
    }

    SECTION("eigenvector scores print to stdout with unit length") {
        const auto [code, out] =
            run_captured(dir, kCli + " centrality --input " + q(kKarate) + " --kind ev");
        REQUIRE(code == 0);
        const auto scores = parse_scores(out);
        REQUIRE(scores.size() == 34);
        double ss = 0;
        for (double v : scores) ss += v * v;
        CHECK(ss == Catch::Approx(1.0).margin(1e-9));
    }

    SECTION("hub scores on a directed star concentrate on the pointing nodes") {
        const std::string star = dir.file("star.txt");
        spit(star, "1 0\n2 0\n3 0\n");
        const auto [code, out] = run_captured(
            dir, kCli + " centrality --input " + q(star) + " --directed --kind hub");
        REQUIRE(code == 0);
        const auto scores = parse_scores(out);
        REQUIRE(scores.size() == 4);
        CHECK(scores[0] == Catch::Approx(0.0).margin(1e-12));
        CHECK(scores[1] == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-9));
    }

    SECTION("katz metadata records the attenuation actually used") {
        const std::string out = dir.file("katz.txt");
        REQUIRE(run(kCli + " centrality --input " + q(kKarate) + " --kind katz --out " +
                    q(out) + " > /dev/null") == 0);
        const json meta = json::parse(slurp(out + ".meta.json"));
        CHECK(meta["kind"] == "katz");
        CHECK(meta["norm"] == "raw");
        CHECK(meta["attenuation"].get<double>() > 0.0);
    }

    SECTION("a divergent attenuation is an operational error") {
        const auto [code, out] = run_captured(
            dir, kCli + " centrality --input " + q(kKarate) + " --kind katz --a 0.9");
        CHECK(code == 2);
        CHECK(out.find("attenuation") != std::string::npos);
    }

    SECTION("a trace is only defined for pagerank") {
        CHECK(run(kCli + " centrality --input " + q(kKarate) + " --kind ev --trace " +
                  q(dir.file("t.txt")) + " 2> /dev/null") == 2);
    }
}

TEST_CASE("cli compare and verify distinguish members from non-members") {
    TempDir dir;
    const std::string member = dir.file("member.txt");
    const std::string stranger = dir.file("stranger.txt");
    REQUIRE(run(kCli + " sample --input " + q(kKarate) +
                " --depth 1 --init outdeg --seed 3 --out " + q(member) + " > /dev/null") == 0);
    REQUIRE(run(kCli + " baseline --input " + q(kKarate) + " --model er --seed 5 --out " +
                q(stranger) + " > /dev/null") == 0);

    SECTION("a degree-true sample passes with bounds checked") {
        const auto [code, out] =
            run_captured(dir, kCli + " compare --original " + q(kKarate) + " --sample " +
                                  q(member) + " --depth 1 --init outdeg --json");
        REQUIRE(code == 0);
        const json j = json::parse(out);
        CHECK(j["pass"] == true);
        CHECK(j["colors_pass"] == true);
        CHECK(j["bounds_checked"] == true);
        CHECK(j["bounds_pass"] == true);
        CHECK(j["sae"].get<double>() <= j["bound_worstcase"].get<double>() + 1e-12);
        CHECK(j["sae"].get<double>() <= j["bound_adaptive"].get<double>() + 1e-12);
    }

    SECTION("an edge-count-matched random graph fails the audit") {
        const auto [code, out] =
            run_captured(dir, kCli + " compare --original " + q(kKarate) + " --sample " +
                                  q(stranger) + " --depth 1 --init outdeg --json");
        REQUIRE(code == 1);
        const json j = json::parse(out);
        CHECK(j["pass"] == false);
        CHECK(j["colors_pass"] == false);
        CHECK(j["colors_preserved_to_depth"] == 0);
    }

    SECTION("verify prints one labelled line per check") {
        const auto [code, out] =
            run_captured(dir, kCli + " verify --input " + q(kKarate) + " --sample " +
                                  q(member) + " --depth 1 --init outdeg");
        REQUIRE(code == 0);
        CHECK(nonempty_lines(out) == 3);
        CHECK(out.find("CHECK colors preserved") != std::string::npos);
        CHECK(out.find("CHECK pagerank error within bounds") != std::string::npos);
        CHECK(out.find("CHECK pagerank iterates agree") != std::string::npos);
        CHECK(out.find("FAIL") == std::string::npos);
        CHECK(out.find("N/A") == std::string::npos);
    }

    SECTION("verify marks bound checks N/A under a constant start") {
        const std::string cs = dir.file("const_sample.txt");
        REQUIRE(run(kCli + " sample --input " + q(kKarate) + " --depth 2 --seed 4 --out " +
                    q(cs) + " > /dev/null") == 0);
        const auto [code, out] = run_captured(
            dir, kCli + " verify --input " + q(kKarate) + " --sample " + q(cs) + " --depth 2");
        REQUIRE(code == 0);
        CHECK(out.find("N/A") != std::string::npos);
        CHECK(out.find("FAIL") == std::string::npos);
    }

    SECTION("verify fails loudly on a structure-breaking sample") {
        const auto [code, out] =
            run_captured(dir, kCli + " verify --input " + q(kKarate) + " --sample " +
                                  q(stranger) + " --depth 1 --init outdeg");
        REQUIRE(code == 1);
        CHECK(out.find("FAIL") != std::string::npos);
    }
}

TEST_CASE("cli baseline draws er, cm, and ergm graphs") {
    TempDir dir;

    SECTION("er keeps the node and edge counts of the template") {
        const std::string out = dir.file("er.txt");
        REQUIRE(run(kCli + " baseline --input " + q(kKarate) + " --model er --seed 2 --out " +
                    q(out) + " > /dev/null") == 0);
        const nest::Graph g = nest::load_edge_list_file(out);
        CHECK(g.n() == 34);
        CHECK(g.m() == 78);
    }

    SECTION("cm preserves the degree sequence and repeats under one seed") {
        const std::string out = dir.file("cm.txt");
        const std::string out2 = dir.file("cm2.txt");
        REQUIRE(run(kCli + " baseline --input " + q(kKarate) + " --model cm --seed 9 --out " +
                    q(out) + " > /dev/null") == 0);
        REQUIRE(run(kCli + " baseline --input " + q(kKarate) + " --model cm --seed 9 --out " +
                    q(out2) + " > /dev/null") == 0);
        CHECK(slurp(out) == slurp(out2));
        const nest::Graph orig = nest::load_edge_list_file(kKarate);
        const nest::Graph g = nest::load_edge_list_file(out);
        REQUIRE(g.n() == orig.n());
        for (std::uint32_t v = 0; v < g.n(); ++v)
            CHECK(g.out_neighbors(v).size() == orig.out_neighbors(v).size());
    }

    SECTION("an ergm theta list fans out into one file per strength") {
        const std::string out = dir.file("ergm.txt");
        REQUIRE(run(kCli + " baseline --input " + q(kKarate) +
                    " --model ergm --theta 0,2.5 --steps 50 --seed 4 --out " + q(out) +
                    " > /dev/null") == 0);
        const nest::Graph g0 = nest::load_edge_list_file(dir.file("ergm_theta_0.txt"));
        const nest::Graph g1 = nest::load_edge_list_file(dir.file("ergm_theta_2.5.txt"));
        CHECK(g0.n() == 34);
        CHECK(g1.n() == 34);
    }

    SECTION("an unknown model is an operational error") {
        CHECK(run(kCli + " baseline --input " + q(kKarate) + " --model zzz --out " +
                  q(dir.file("x.txt")) + " 2> /dev/null") == 2);
    }
}

TEST_CASE("cli experiment writes csv files with stable headers") {
    TempDir dir;
    const std::string out_dir = dir.file("exp");
    const std::string cmd = kCli + " experiment --input " + q(kKarate) +
                            " --kinds pr --depth-min 1 --depth-max 2 --samples 3 --seed 5" +
                            " --threads 2 --no-runtimes --out-dir " + q(out_dir);
    REQUIRE(run(cmd + " > /dev/null") == 0);

    const std::string raw = slurp(fs::path(out_dir) / "experiment_pr.csv");
    std::istringstream is(raw);
    std::string header;
    std::getline(is, header);
    CHECK(header == "depth,sample_idx,sae,mae,jaccard,bound_worstcase,bound_adaptive");
    CHECK(nonempty_lines(raw) == 1 + 2 * 3);

    const std::string summary = slurp(fs::path(out_dir) / "experiment_pr_summary.csv");
    std::istringstream ss(summary);
    std::getline(ss, header);
    CHECK(header == "depth,n_samples,median_sae,q16_sae,q84_sae,median_mae,q16_mae,q84_mae,"
                    "median_jaccard,q16_jaccard,q84_jaccard");
    CHECK(nonempty_lines(summary) == 1 + 2);

    SECTION("a rerun without runtimes is byte identical") {
        const std::string again = dir.file("exp_again");
        REQUIRE(run(kCli + " experiment --input " + q(kKarate) +
                    " --kinds pr --depth-min 1 --depth-max 2 --samples 3 --seed 5" +
                    " --threads 1 --no-runtimes --out-dir " + q(again) + " > /dev/null") == 0);
        CHECK(slurp(fs::path(again) / "experiment_pr.csv") == raw);
        CHECK(slurp(fs::path(again) / "experiment_pr_summary.csv") == summary);
    }
}

TEST_CASE("cli help and argument errors use the exit-code contract") {
    TempDir dir;

    SECTION("--help succeeds and names every subcommand") {
        const auto [code, out] = run_captured(dir, kCli + " --help");
        REQUIRE(code == 0);
        for (const char* name :
             {"refine", "sample", "centrality", "compare", "baseline", "experiment", "verify"})
            CHECK(out.find(name) != std::string::npos);
    }

    SECTION("unknown flags and missing options are operational errors") {
        CHECK(run(kCli + " refine --input " + q(kKarate) + " --bogus 2> /dev/null") == 2);
        CHECK(run(kCli + " refine 2> /dev/null") == 2);
        CHECK(run(kCli + " 2> /dev/null") == 2);
        CHECK(run(kCli + " centrality --input " + q(kKarate) + " --kind zzz 2> /dev/null") == 2);
    }

    SECTION("unreadable input reports an error on stderr") {
        const auto [code, out] =
            run_captured(dir, kCli + " refine --input " + q(dir.file("missing.txt")));
        CHECK(code == 2);
        CHECK(out.find("error:") != std::string::npos);
    }

    SECTION("an invalid sampling depth is rejected before any work") {
        CHECK(run(kCli + " sample --input " + q(kKarate) + " --depth 0 --out " +
                  q(dir.file("x.txt")) + " 2> /dev/null") == 2);
    }
}
