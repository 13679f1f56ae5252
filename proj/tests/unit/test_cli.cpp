#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_helpers.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/io.hpp"

using namespace thinfilm;
using namespace thinfilm::testing;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int exit_code;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(THINFILM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return {WEXITSTATUS(rc)};
}

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli energy on the uniform e3 field reports zero total") {
    const auto dir = fresh_dir("tf_cli_energy");
    const TorusGrid g(32);
    write_mfd1((dir / "e3.mfd").string(), uniform_state(g, 0, 0, 1));
    const auto run = run_cli("energy --field " + (dir / "e3.mfd").string() +
                             " --eps 0.1 --lambda 0.5 --out " + (dir / "out").string());
    CHECK(run.exit_code == 0);
    const std::string csv = slurp(dir / "out" / "energy.csv");
    CHECK(csv.find("exchange") != std::string::npos);
    // total column is exactly 0
    CHECK(csv.find(",0,") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("cli profile emits tanh values at x = eps") {
    const auto dir = fresh_dir("tf_cli_profile");
    const auto run =
        run_cli("profile --eps 0.02 --R inf --out " + (dir / "out").string());
    CHECK(run.exit_code == 0);
    std::ifstream in(dir / "out" / "profile.csv");
    std::string line;
    std::getline(in, line);  // header
    bool mid_ok = false, eps_ok = false;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double x = std::stod(line.substr(0, comma));
        const double xi = std::stod(line.substr(comma + 1));
        if (std::abs(x) < 1e-15) mid_ok = std::abs(xi) < 1e-14;
        if (std::abs(x - 0.02) < 1e-12) eps_ok = std::abs(xi - std::tanh(1.0)) < 1e-12;
    }
    CHECK(mid_ok);
    CHECK(eps_ok);
    fs::remove_all(dir);
}

TEST_CASE("cli rejects malformed configs with exit 2 and no partial outputs") {
    const auto dir = fresh_dir("tf_cli_bad");
    {
        std::ofstream cfg(dir / "bad.json");
        cfg << "{ this is not json";
    }
    const auto run = run_cli("sweep --config " + (dir / "bad.json").string() + " --out " +
                             (dir / "out").string());
    CHECK(run.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "out" / "sweep.csv"));

    {
        std::ofstream cfg(dir / "unknown.json");
        cfg << R"({"eps_list": [0.05], "lambda_list": [0.0], "bogus_key": 1})";
    }
    const auto run2 = run_cli("sweep --config " + (dir / "unknown.json").string() + " --out " +
                              (dir / "out2").string());
    CHECK(run2.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "out2" / "sweep.csv"));
    fs::remove_all(dir);
}

TEST_CASE("cli sweep reproduces byte-identical CSVs and manifests round trip") {
    const auto dir = fresh_dir("tf_cli_repro");
    {
        std::ofstream cfg(dir / "cfg.json");
        cfg << R"({"eps_list": [0.05], "lambda_list": [0.0, 1.9],
                   "seeds": ["e3", "stripe2"], "max_iters": 150, "rng_seed": 7})";
    }
    const auto r1 = run_cli("sweep --config " + (dir / "cfg.json").string() + " --out " +
                            (dir / "a").string());
    REQUIRE(r1.exit_code == 0);
    const auto r2 = run_cli("sweep --config " + (dir / "cfg.json").string() + " --out " +
                            (dir / "b").string() + " --jobs 2");
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));

    // manifest round trip: run from the emitted manifest
    const auto r3 = run_cli("sweep --config " + (dir / "a" / "manifest.json").string() +
                            " --out " + (dir / "c").string());
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "c" / "sweep.csv"));

    // manifest subcommand mismatch is a validation error
    const auto r4 = run_cli("minimize --config " + (dir / "a" / "manifest.json").string() +
                            " --out " + (dir / "d").string());
    CHECK(r4.exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("cli strayfield-check emits the pinned column layout") {
    const auto dir = fresh_dir("tf_cli_sf");
    const auto run2 = run_cli("strayfield-check --out " + (dir / "out").string());
    CHECK(run2.exit_code == 0);
    std::ifstream in(dir / "out" / "theorem51.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "estimate,t,nz,n,lhs_exact,approx,error,exchange_bound,ratio");
    fs::remove_all(dir);
}
