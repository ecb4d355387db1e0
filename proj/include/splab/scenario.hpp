#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "splab/config.hpp"
#include "splab/primal.hpp"
#include "splab/transformed.hpp"

namespace splab {

struct ScenarioResult {
    int exit_code = 0;  // 0 ok, 2 numerical failure, 3 I/O failure
    PrimalOutcome primal;
    TouchdownOutcome transformed;
    std::string summary_json;
};

/// Runs one scenario end to end: bump initial data, primal run, mapped
/// transformed run, diagnostics. Writes primal/transformed diagnostics CSVs,
/// snapshot CSVs, and summary.json into out_dir.
ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const std::filesystem::path& out_dir);

struct SweepRow {
    double axis_value = 0.0;
    std::string outcome;  // global | singular | FAILED
    double t_singular = 0.0;  // NaN when not singular
    double Lq0 = 0.0;
    double theta = 0.0;  // NaN when unavailable
};

struct SweepResult {
    int exit_code = 0;
    std::vector<SweepRow> rows;
};

/// Runs one scenario per axis value (axis in {p, alpha, delta, m0}),
/// concurrently up to `jobs`, each into out_dir/<axis>=<value>/, and writes
/// out_dir/sweep.csv with rows in input order. Failed rows are marked FAILED;
/// exit code 0 as long as at least one row succeeded (or the list is empty).
SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, unsigned jobs,
                  const std::filesystem::path& out_dir);

/// Formats a double with 17 significant digits (the fixed file format).
std::string format_g17(double v);

}  // namespace splab
