#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args, const std::string& tag) {
    const std::string out_file = "cli_out_" + tag + ".txt";
    const std::string cmd =
        std::string(ZNLAB_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_err_" + tag + ".txt";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.output = slurp(out_file);
    return r;
}

}  // namespace

TEST_CASE("params prints the explicit constants (text and JSON)") {
    const auto r = run_cli("params --gamma 0 --epsilon 0.01 --a 0.5 --T 1", "params");
    CHECK(r.exit_code == 0);
    // flat key-value block
    CHECK(r.output.find("h = 0.1") != std::string::npos);
    CHECK(r.output.find("t_bar = 0.2") != std::string::npos);
    CHECK(r.output.find("alpha = 0.02") != std::string::npos);
    // JSON document with the full key set
    const auto brace = r.output.find('{');
    REQUIRE(brace != std::string::npos);
    const auto doc = nlohmann::json::parse(r.output.substr(brace));
    CHECK(doc["h"].get<double>() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(doc["t_bar"].get<double>() == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(doc["alpha"].get<double>() == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(doc.contains("eta"));
    CHECK(doc.contains("delta"));
    CHECK(doc.contains("c1"));
    CHECK(doc.contains("alpha_paper_variant"));
    CHECK(doc.contains("r_lower"));
    CHECK(doc.contains("r_upper"));
    CHECK(doc.contains("informative_t_bar"));
}

TEST_CASE("params for gamma > 0 reports discrepancies and the vacuity scan") {
    const auto r = run_cli("params --gamma 0.5 --epsilon 0.05 --a 0.8 --T 1", "params_pos");
    CHECK(r.exit_code == 0);
    const auto brace = r.output.find('{');
    REQUIRE(brace != std::string::npos);
    const auto doc = nlohmann::json::parse(r.output.substr(brace));
    CHECK(doc["informative_t_bar"].get<bool>() == false);  // vacuous regime is not an error
    CHECK(doc["discrepancies"].size() == 2);
    CHECK(doc.contains("vacuity_scan"));
    CHECK(doc["vacuity_scan"]["fully_vacuous"].get<bool>() == false);
}

TEST_CASE("params rejects an inadmissible exponent with exit code 2") {
    const auto r = run_cli("params --gamma 0.5 --epsilon 0.05 --a 0.5 --T 1", "params_bad");
    CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flags exit with code 2") {
    const auto r = run_cli("simulate --no-such-flag 1", "badflag");
    CHECK(r.exit_code == 2);
}

TEST_CASE("selftest passes on a clean build") {
    const auto r = run_cli("selftest", "selftest");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[FAIL]") == std::string::npos);
    CHECK(r.output.find("[PASS]") != std::string::npos);
}

TEST_CASE("simulate: byte-identical reports across repeats and worker counts") {
    const std::string flags =
        "simulate --gamma 0 --epsilon 0.05 --a 0.5 --T 1 --dt 1e-3 --paths 2000 --seed 42";
    auto a = run_cli(flags + " --threads 1 --out cli_rep_a.json", "sim_a");
    auto b = run_cli(flags + " --threads 3 --out cli_rep_b.json", "sim_b");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    const auto ra = slurp("cli_rep_a.json");
    const auto rb = slurp("cli_rep_b.json");
    REQUIRE(!ra.empty());
    CHECK(ra == rb);
}

TEST_CASE("simulate: config file round-trip reproduces the run") {
    const std::string flags =
        "simulate --gamma 0.5 --epsilon 0.1 --a 0.75 --T 0.5 --dt 1e-3 --paths 512 --seed 7";
    auto a = run_cli(flags + " --out cli_rt_a.json", "rt_a");
    CHECK(a.exit_code == 0);
    const auto doc = nlohmann::json::parse(slurp("cli_rt_a.json"));

    std::ofstream cfg("cli_roundtrip.cfg");
    cfg << "# regenerated from the report's config echo\n";
    cfg << "gamma = " << doc["config"]["gamma"].dump() << "\n";
    cfg << "epsilon = " << doc["config"]["epsilon"].dump() << "\n";
    cfg << "a = " << doc["config"]["a"].dump() << "\n";
    cfg << "T = " << doc["config"]["T"].dump() << "\n";
    cfg << "dt = " << doc["config"]["dt"].dump() << "\n";
    cfg << "paths = " << doc["config"]["paths"].dump() << "\n";
    cfg << "seed = " << doc["config"]["seed"].dump() << "\n";
    cfg.close();

    auto b = run_cli("simulate --config cli_roundtrip.cfg --out cli_rt_b.json", "rt_b");
    CHECK(b.exit_code == 0);
    CHECK(slurp("cli_rt_a.json") == slurp("cli_rt_b.json"));
}

TEST_CASE("simulate: csv format, plot export, and path dumps") {
    const auto r = run_cli(
        "simulate --gamma 0 --epsilon 0.05 --a 0.5 --T 0.5 --dt 1e-3 --paths 256 --seed 3 "
        "--format csv --out cli_row.csv --plot-out cli_plot.csv --dump-paths 2",
        "csv");
    CHECK(r.exit_code == 0);
    const auto row = slurp("cli_row.csv");
    CHECK(row.rfind("gamma,epsilon,a,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), '\n') == 2);  // header + one row
    const auto plot = slurp("cli_plot.csv");
    CHECK(plot.rfind("t,extremal,envelope_lower,envelope_upper,q05,q50,q95", 0) == 0);
    const auto dump = slurp("cli_row.csv.path0.csv");
    CHECK(dump.rfind("t,x,w,m_sgn,m_moll,occupation", 0) == 0);
    // first data row is the zero initial condition
    CHECK(dump.find("\n0,0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("sweep emits one csv row per epsilon") {
    const auto r = run_cli(
        "sweep --gamma 0 --a 0.5 --T 1 --dt 1e-3 --paths 400 --seed 11 "
        "--epsilons 0.2,0.1 --out cli_sweep.csv",
        "sweep");
    CHECK(r.exit_code == 0);
    const auto table = slurp("cli_sweep.csv");
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);  // header + two rows
}

TEST_CASE("verify passes and is byte-identical across repeated runs") {
    const std::string flags =
        "verify --gamma 0 --epsilon 0.05 --a 0.5 --T 1 --dt 1e-3 --paths 2000 --seed 42";
    auto a = run_cli(flags + " --out cli_verify_a.json", "verify_a");
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("[FAIL]") == std::string::npos);
    auto b = run_cli(flags + " --out cli_verify_b.json", "verify_b");
    CHECK(b.exit_code == 0);
    CHECK(slurp("cli_verify_a.json") == slurp("cli_verify_b.json"));
    CHECK(a.output == b.output);
}

TEST_CASE("invalid configuration values exit with code 2") {
    const auto r = run_cli("simulate --gamma 1.5 --epsilon 0.05", "badgamma");
    CHECK(r.exit_code == 2);
}
