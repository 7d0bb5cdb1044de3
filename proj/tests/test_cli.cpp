#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "evlab/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"evlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = evlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("dtc subcommand emits the expected record") {
    auto r = run_cli({"dtc", "--property", "triangle-free", "--n", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "{\"D\":6,\"N\":6,\"evasive\":true}\n");
}

TEST_CASE("identical invocations produce byte-identical output") {
    auto a = run_cli({"verify", "oliver", "--trials", "10"});
    auto b = run_cli({"verify", "oliver", "--trials", "10"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("outputs parse as JSON") {
    for (auto args : std::vector<std::vector<std::string>>{
             {"primes", "near-fermat", "--eps", "1/4", "--limit", "1000"},
             {"primes", "is-prime", "--m", "561"},
             {"primes", "dirichlet", "--m", "3", "--a", "1"},
             {"group", "--construct", "gamma-qd", "--q", "7", "--d", "2"},
             {"orbitals", "--construct", "gamma-qd", "--q", "7", "--d", "2"},
             {"paley", "--q", "17", "--d", "8"},
             {"weil", "--q", "101", "--l", "4", "--a", "0,1"},
             {"clique", "--graph", "K5", "--h", "3"},
             {"partition", "uncond-sparse", "--n", "30030"},
             {"enumerate-properties", "--n", "4", "--count-only"},
         }) {
        auto r = run_cli(args);
        const std::string what = args[0] + ": " + r.err;
        REQUIRE_MESSAGE(r.code == 0, what);
        CHECK_NOTHROW(json::parse(r.out));
    }
}

TEST_CASE("near-fermat list matches the documented values") {
    auto r = run_cli({"primes", "near-fermat", "--eps", "1/4", "--limit", "1000"});
    CHECK(r.out == "[2,3,5,17,97,193,257,641,769]\n");
}

TEST_CASE("usage errors exit with 2") {
    auto r = run_cli({"nonsense"});
    CHECK(r.code == 2);
    auto r2 = run_cli({"dtc"});  // missing required options
    CHECK(r2.code == 2);
}

TEST_CASE("chi from a face-list file") {
    const std::string path = "/tmp/evlab_test_faces.txt";
    {
        std::ofstream f(path);
        f << "0\n1\n";
    }
    auto r = run_cli({"chi", "--faces", path});
    CHECK(r.code == 0);
    CHECK(r.out == "{\"chi\":2}\n");
}

TEST_CASE("fixed-complex from files") {
    const std::string faces = "/tmp/evlab_test_fx_faces.txt";
    const std::string group = "/tmp/evlab_test_fx_group.json";
    {
        std::ofstream f(faces);
        f << "0\n1\n0 1\n";  // full simplex on two points
        std::ofstream g(group);
        g << "{\"n\":2,\"generators\":[[1,0]]}";
    }
    auto r = run_cli({"fixed-complex", "--faces", faces, "--group", group});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["k"] == 1);
    CHECK(j["chi"] == 1);
}

TEST_CASE("collapse subcommand") {
    const std::string path = "/tmp/evlab_test_collapse.txt";
    {
        std::ofstream f(path);
        f << "0 1 2\n0 1\n0 2\n1 2\n0\n1\n2\n";  // full triangle
    }
    auto r = run_cli({"collapse", "--faces", path});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["collapsible"] == true);
}

TEST_CASE("verify subcommand writes a report and sets the exit code") {
    const std::string path = "/tmp/evlab_test_report.json";
    auto r = run_cli({"verify", "ark", "--n", "3", "--out", path});
    CHECK(r.code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    json doc = json::parse(in);
    CHECK(doc["reports"][0]["verdict"] == "pass");
    CHECK(r.err.find("ark_exhaustive_n3: pass") != std::string::npos);
}

TEST_CASE("config file and seed override") {
    const std::string cfg = "/tmp/evlab_test_cfg.json";
    {
        std::ofstream f(cfg);
        f << "{\"seed\": 777, \"output_format\": \"tsv\"}";
    }
    auto r = run_cli({"--config", cfg, "orbitals", "--construct", "gamma-qd",
                      "--q", "7", "--d", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("rep_i\trep_j\tsize\ttag", 0) == 0);

    setenv("EVLAB_SEED", "999", 1);
    auto a = run_cli({"verify", "oliver", "--trials", "5"});
    unsetenv("EVLAB_SEED");
    auto j = json::parse(a.out);
    CHECK(j["seed"] == 999);
}

TEST_CASE("chowla planner surfaces empty windows as structured errors") {
    // q = 3 makes the fallback congruence contradictory for some n; find one
    bool seen = false;
    for (int n = 10000; n < 10400 && !seen; ++n) {
        auto r = run_cli({"partition", "chowla", "--n", std::to_string(n),
                          "--delta", "1/5"});
        if (r.code == 1 && r.out.find("no_prime_in_window") != std::string::npos) {
            CHECK_NOTHROW(json::parse(r.out));
            seen = true;
        }
    }
    CHECK(seen);
}
