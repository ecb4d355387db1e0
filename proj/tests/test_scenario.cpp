#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "splab/config.hpp"
#include "splab/errors.hpp"
#include "splab/scenario.hpp"

using namespace splab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig small_steady() {
    ScenarioConfig cfg;
    cfg.family = "power";
    cfg.p = 2.0;
    cfg.M = 1.0;
    cfg.m0 = 1.0;  // bump amplitude zero: exact steady state
    cfg.delta = 0.1;
    cfg.Nu = cfg.Nf = 64;
    cfg.T = 0.5;
    return cfg;
}

}  // namespace

TEST_CASE("run_scenario: steady case produces both horizons and all files") {
    const fs::path dir = fs::temp_directory_path() / "splab_test_steady";
    fs::remove_all(dir);
    const auto res = run_scenario(small_steady(), dir);
    CHECK(res.exit_code == 0);
    CHECK(res.primal.status == PrimalStatus::reached_horizon);
    CHECK(res.transformed.status == TransformedStatus::reached_horizon);
    for (const char* name :
         {"primal_diagnostics.csv", "transformed_diagnostics.csv", "primal_snapshots.csv",
          "transformed_snapshots.csv", "summary.json"})
        CHECK(fs::exists(dir / name));
    const std::string summary = slurp(dir / "summary.json");
    CHECK(summary.find("\"ReachedHorizon\"") != std::string::npos);
    CHECK(summary.find("\"t_blowup\": null") != std::string::npos);
    const std::string diag = slurp(dir / "primal_diagnostics.csv");
    CHECK(diag.rfind("t,min_field,max_field,mass,L_or_L1,Lq,sigma,Sigma,dt\n", 0) == 0);
}

TEST_CASE("run_scenario: subcritical power family stays global") {
    ScenarioConfig cfg = small_steady();
    cfg.p = 1.0;
    cfg.m0 = 0.2;
    cfg.delta = 0.1;
    cfg.T = 0.5;
    const fs::path dir = fs::temp_directory_path() / "splab_test_global";
    fs::remove_all(dir);
    const auto res = run_scenario(cfg, dir);
    CHECK(res.exit_code == 0);
    CHECK(res.primal.status == PrimalStatus::reached_horizon);
    CHECK(res.transformed.status == TransformedStatus::reached_horizon);
    CHECK(min_value(res.transformed.f_final) > 0.0);
    // no majorant for p = 1: threshold reported as null
    CHECK(res.summary_json.find("\"theta_M\": null") != std::string::npos);
}

TEST_CASE("run_scenario determinism: byte-identical reruns") {
    const fs::path a = fs::temp_directory_path() / "splab_det_a";
    const fs::path b = fs::temp_directory_path() / "splab_det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    ScenarioConfig cfg = small_steady();
    cfg.m0 = 0.3;  // non-trivial dynamics
    run_scenario(cfg, a);
    run_scenario(cfg, b);
    for (const char* name :
         {"primal_diagnostics.csv", "transformed_diagnostics.csv", "primal_snapshots.csv",
          "transformed_snapshots.csv", "summary.json"})
        CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("sweep: empty values, ordering, axis validation") {
    const fs::path dir = fs::temp_directory_path() / "splab_test_sweep";
    fs::remove_all(dir);
    ScenarioConfig base = small_steady();
    base.m0 = 0.3;
    base.T = 0.2;

    const auto empty = sweep(base, "p", {}, 2, dir / "empty");
    CHECK(empty.exit_code == 0);
    CHECK(slurp(dir / "empty" / "sweep.csv") == "axis_value,outcome,t_singular,Lq0,theta_M\n");

    CHECK_THROWS_AS(sweep(base, "T", {1.0}, 1, dir / "bad"), RangeError);

    const auto res = sweep(base, "p", {0.5, 1.0}, 2, dir / "p");
    CHECK(res.exit_code == 0);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].axis_value == 0.5);
    CHECK(res.rows[1].axis_value == 1.0);
    CHECK(res.rows[0].outcome == "global");
    CHECK(res.rows[1].outcome == "global");
    CHECK(fs::exists(dir / "p" / "p=0.5" / "summary.json"));
    CHECK(fs::exists(dir / "p" / "p=1" / "summary.json"));
    const std::string csv = slurp(dir / "p" / "sweep.csv");
    CHECK(csv.find("global") != std::string::npos);
}

TEST_CASE("sweep marks invalid rows FAILED without aborting the rest") {
    const fs::path dir = fs::temp_directory_path() / "splab_test_sweep_fail";
    fs::remove_all(dir);
    ScenarioConfig base = small_steady();
    base.m0 = 0.3;
    base.T = 0.2;
    // m0 = 2 > M is invalid and must fail its row only
    const auto res = sweep(base, "m0", {0.3, 2.0}, 1, dir);
    CHECK(res.exit_code == 0);
    CHECK(res.rows[0].outcome == "global");
    CHECK(res.rows[1].outcome == "FAILED");
}
