#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dtplan/baselines.hpp"
#include "dtplan/domain_io.hpp"

using json = nlohmann::ordered_json;

namespace {

const std::string kBin = DTPLAN_CLI_PATH;
const std::string kDomainsDir = DTPLAN_DOMAINS_DIR;

int run(const std::string& args) {
    std::string cmd = "\"" + kBin + "\" " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc >= 0);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.size() && line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

bool file_exists(const std::string& path) { return std::ifstream(path).good(); }

}  // namespace

TEST_CASE("exit codes distinguish domain errors from usage errors") {
    CHECK(run("plan no_such_file.json") == 1);
    CHECK(run("plan") == 2);
    CHECK(run("plan \"" + kDomainsDir + "/tomato.json\" --strategy bogus") == 2);
    CHECK(run("gen --depth 0 --out cli_gen_bad.json") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("validate \"" + kDomainsDir + "/tomato.json\"") == 0);

    std::ofstream("cli_bad_domain.json") << "{]";
    CHECK(run("validate cli_bad_domain.json") == 1);
}

TEST_CASE("a zero expansion budget still reports the root plan") {
    CHECK(run("plan \"" + kDomainsDir +
              "/tomato.json\" --budget-expansions 0 --out cli_root_plan.json") == 0);
    json doc = json::parse(slurp("cli_root_plan.json"));
    REQUIRE(doc["plans"].size() == 1);
    CHECK(doc["plans"][0]["steps"] == json::array({"deliver"}));
    CHECK(doc["plans"][0]["eu_lo"].get<double>() <= doc["plans"][0]["eu_hi"].get<double>());
    CHECK(doc["stats"]["expansions"] == 0);
}

TEST_CASE("planning to completion matches the enumeration oracle") {
    CHECK(run("plan \"" + kDomainsDir +
              "/dvt_small.json\" --strategy sensitivity --out cli_plan_small.json") == 0);
    CHECK(run("enumerate \"" + kDomainsDir + "/dvt_small.json\" --out cli_enum_small.json") == 0);
    json planned = json::parse(slurp("cli_plan_small.json"));
    json oracle = json::parse(slurp("cli_enum_small.json"));
    CHECK(oracle["total_plans"] == 22);
    CHECK(planned["plans"] == oracle["plans"]);
}

TEST_CASE("generation is deterministic and verifiable end to end") {
    CHECK(run("gen --seed 7 --plans-target 100 --out cli_gen_a.json") == 0);
    CHECK(run("gen --seed 7 --plans-target 100 --out cli_gen_b.json") == 0);
    CHECK(slurp("cli_gen_a.json") == slurp("cli_gen_b.json"));

    CHECK(run("validate cli_gen_a.json") == 0);
    dtplan::Domain d = dtplan::load_domain_file("cli_gen_a.json");
    std::size_t count = dtplan::enumerate_plans(d).size();
    CHECK(count >= 80);
    CHECK(count <= 120);
}

TEST_CASE("bench emits one row per domain, algorithm, and sweep point") {
    std::string small = "\"" + kDomainsDir + "/dvt_small.json\"";
    CHECK(run("bench " + small +
              " --algo both --sweep COST_FATALITY=50000:500000:10 --csv cli_bench.csv") == 0);
    auto rows = read_csv("cli_bench.csv");
    REQUIRE(!rows.empty());
    CHECK(rows[0] == std::vector<std::string>{"domain", "algo", "strategy", "param",
                                              "param_value", "plans_evaluated", "expansions",
                                              "peak_states", "wall_ms", "optimal_eu",
                                              "n_optimal_plans"});
    CHECK(rows.size() == 1 + 10 * (3 + 1));

    // Every algorithm agrees on the optimum at each sweep point, and the
    // refinement planner touches only a sliver of the 22 concrete plans.
    std::map<std::string, double> best;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 11);
        CHECK(rows[i][0] == "dvt_small");
        CHECK(rows[i][3] == "COST_FATALITY");
        double eu = std::stod(rows[i][9]);
        auto [it, fresh] = best.emplace(rows[i][4], eu);
        if (!fresh) CHECK(eu == doctest::Approx(it->second).epsilon(1e-9));
        if (rows[i][1] == "drips") {
            long evaluated = std::stol(rows[i][5]);
            CHECK(evaluated >= 10);
            CHECK(evaluated <= 40);
        }
    }
}

TEST_CASE("bench refuses invalid input without leaving a CSV behind") {
    std::ofstream("cli_bench_bad.json") << "{\"attributes\": 3}";
    std::remove("cli_bench_none.csv");
    CHECK(run("bench cli_bench_bad.json --csv cli_bench_none.csv") == 1);
    CHECK(!file_exists("cli_bench_none.csv"));
}

TEST_CASE("identical invocations produce identical outputs up to wall time") {
    std::string pair = "\"" + kDomainsDir + "/test_pair.json\"";
    CHECK(run("bench " + pair + " --algo both --csv cli_det_a.csv") == 0);
    CHECK(run("bench " + pair + " --algo both --csv cli_det_b.csv") == 0);
    auto a = read_csv("cli_det_a.csv");
    auto b = read_csv("cli_det_b.csv");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].size() == b[i].size());
        for (std::size_t c = 0; c < a[i].size(); ++c) {
            if (i > 0 && c == 8) continue;  // wall_ms
            CHECK(a[i][c] == b[i][c]);
        }
    }
}
