// splab: simulation and verification laboratory for a 1-D quasilinear
// aggregation-diffusion system, in primal (u,v) and pseudo-inverse form.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "splab/config.hpp"
#include "splab/diagnostics.hpp"
#include "splab/errors.hpp"
#include "splab/scenario.hpp"

namespace {

using namespace splab;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

ScenarioConfig load_with_overrides(const std::string& config_path,
                                   const std::optional<std::uint64_t>& seed) {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    return cfg;
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir) {
    const auto res = run_scenario(cfg, out_dir.empty() ? cfg.out : out_dir);
    std::cout << res.summary_json;
    return res.exit_code;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& axis,
              const std::vector<double>& values, unsigned jobs,
              const std::string& out_dir) {
    const auto res = sweep(cfg, axis, values, jobs, out_dir.empty() ? cfg.out : out_dir);
    for (const auto& row : res.rows)
        std::cout << axis << "=" << row.axis_value << " -> " << row.outcome << "\n";
    return res.exit_code;
}

int cmd_verify(const ScenarioConfig& cfg, const std::string& out_dir) {
    using nlohmann::json;
    const std::vector<double> masses = {0.5, 1.0, 2.0};
    const std::size_t trials = 1000;
    const std::size_t grid_n = 256;
    json report;
    std::size_t total_violations = 0;

    json prop23 = json::array();
    for (double M : masses) {
        const auto rep = run_prop23_suite(M, trials, grid_n, cfg.seed);
        json v = json::array();
        for (const auto& viol : rep.violations)
            v.push_back({{"index", viol.index}, {"lhs", viol.lhs}, {"rhs", viol.rhs}});
        prop23.push_back({{"M", M}, {"checked", rep.checked}, {"violations", v}});
        total_violations += rep.violations.size();
        std::cout << "prop23 M=" << M << ": " << rep.checked << " checked, "
                  << rep.violations.size() << " violations\n";
    }
    report["prop23"] = prop23;

    json lab1 = json::array();
    const std::vector<DiffusionSpec> specs = {
        DiffusionSpec::inverse(), DiffusionSpec::power(1.0), DiffusionSpec::log_alpha(1.0)};
    for (const auto& spec : specs) {
        const DiffusionLaw law(spec);
        for (double M : masses) {
            const auto rep = run_lab1_suite(law, M, trials, grid_n, cfg.seed);
            json v = json::array();
            for (const auto& viol : rep.violations)
                v.push_back({{"index", viol.index}, {"lhs", viol.lhs}, {"rhs", viol.rhs}});
            lab1.push_back({{"spec", spec.name()}, {"M", M},
                            {"checked", rep.checked}, {"violations", v}});
            total_violations += rep.violations.size();
            std::cout << "lab1 " << spec.name() << " M=" << M << ": " << rep.checked
                      << " checked, " << rep.violations.size() << " violations\n";
        }
    }
    report["lab1"] = lab1;

    const std::filesystem::path dir = out_dir.empty() ? cfg.out : out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    std::ofstream out(dir / "verify_report.json");
    if (!out) throw IoError("cannot write verify_report.json");
    out << report.dump(2) << "\n";
    return total_violations == 0 ? 0 : 2;
}

int cmd_threshold(const ScenarioConfig& cfg) {
    const DiffusionLaw law(cfg.diffusion());
    const double theta = theta_M(cfg.q, cfg.M, law);
    std::printf("%.17g\n", theta);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"splab: 1-D aggregation-diffusion simulation and verification lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, axis, values_csv;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;

    auto* sim = app.add_subcommand("simulate", "run one scenario");
    sim->add_option("--config", config_path, "config file (key=value lines)");
    sim->add_option("--out", out_dir, "output directory (overrides config)");
    sim->add_option("--seed", seed, "seed override");

    auto* sw = app.add_subcommand("sweep", "run a parameter sweep");
    sw->add_option("--config", config_path, "base config file");
    sw->add_option("--axis", axis, "sweep axis: p, alpha, delta, or m0")->required();
    sw->add_option("--values", values_csv, "comma-separated axis values")->required();
    sw->add_option("--jobs", jobs, "max concurrent scenarios");
    sw->add_option("--out", out_dir, "output directory (overrides config)");
    sw->add_option("--seed", seed, "seed override");

    auto* ver = app.add_subcommand("verify", "run the randomized inequality suites");
    ver->add_option("--config", config_path, "config file (seed source)");
    ver->add_option("--out", out_dir, "output directory for the JSON report");
    ver->add_option("--seed", seed, "seed override");

    auto* thr = app.add_subcommand("threshold", "print the virial threshold for q, M, family");
    thr->add_option("--config", config_path, "config file naming family, q, M");

    CLI11_PARSE(app, argc, argv);

    try {
        const ScenarioConfig cfg = load_with_overrides(config_path, seed);
        if (sim->parsed()) return cmd_simulate(cfg, out_dir);
        if (sw->parsed()) return cmd_sweep(cfg, axis, parse_values(values_csv), jobs, out_dir);
        if (ver->parsed()) return cmd_verify(cfg, out_dir);
        if (thr->parsed()) return cmd_threshold(cfg);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const RangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
