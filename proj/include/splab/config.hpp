#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "splab/nonlinearity.hpp"

namespace splab {

/// One scenario = one diffusion family + initial-data parameters + solver
/// knobs. Parsed from key=value lines; '#' starts a comment; unknown keys are
/// rejected. See README for the full key table.
struct ScenarioConfig {
    std::string family = "power";  // power | log | inverse
    double p = 2.0;
    double alpha = 1.0;
    double C = 1.0;

    double M = 1.0;
    double m0 = 0.05;
    double delta = 0.02;

    std::size_t Nu = 256;
    std::size_t Nf = 256;

    double T = 10.0;
    double q = 3.0;

    double safety = 0.4;
    double u_cap = 1e8;
    double f_floor = 1e-8;
    double dt_min = 1e-14;
    double dt_max = 1e-2;
    double sample_interval = 0.0;    // 0 = T/1000
    double snapshot_interval = 0.0;  // 0 = T/10
    std::string stepper = "rk2";     // euler | rk2

    std::uint64_t seed = 42;
    std::string out = "out";

    DiffusionSpec diffusion() const;
};

/// Parses the key=value format. Throws ParseError (with line number) on
/// syntax/unknown keys and RangeError (with key name) on out-of-range values.
ScenarioConfig parse_config(std::string_view text);

/// Reads and parses a config file; throws Error on I/O failure.
ScenarioConfig load_config(const std::string& path);

/// Re-validates ranges (used after programmatic edits, e.g. sweep overrides).
void validate(const ScenarioConfig& cfg);

}  // namespace splab
