#include "splab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "splab/errors.hpp"

namespace splab {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + v + "'");
    }
}

std::size_t parse_size(const std::string& v, int line) {
    const double x = parse_double(v, line);
    if (x < 0 || x != static_cast<double>(static_cast<std::size_t>(x)))
        throw ParseError(line, "expected a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

}  // namespace

DiffusionSpec ScenarioConfig::diffusion() const {
    if (family == "power") return DiffusionSpec::power(p, C);
    if (family == "log") return DiffusionSpec::log_alpha(alpha, C);
    if (family == "inverse") return DiffusionSpec::inverse();
    throw RangeError("family", "must be power, log, or inverse");
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.family != "power" && cfg.family != "log" && cfg.family != "inverse")
        throw RangeError("family", "must be power, log, or inverse");
    if (!(cfg.C > 0.0)) throw RangeError("C", "must be positive");
    if (!(cfg.M > 0.0)) throw RangeError("M", "must be positive");
    if (!(cfg.m0 > 0.0) || cfg.m0 > cfg.M) throw RangeError("m0", "requires 0 < m0 <= M");
    if (!(cfg.delta > 0.0)) throw RangeError("delta", "must be positive");
    if (cfg.Nu < 8) throw RangeError("Nu", "must be at least 8");
    if (cfg.Nf < 8) throw RangeError("Nf", "must be at least 8");
    if (!(cfg.T > 0.0)) throw RangeError("T", "must be positive");
    if (!(cfg.q > 2.0)) throw RangeError("q", "must exceed 2");
    if (!(cfg.safety > 0.0) || cfg.safety > 1.0) throw RangeError("safety", "requires 0 < safety <= 1");
    if (!(cfg.u_cap > 0.0)) throw RangeError("u_cap", "must be positive");
    if (!(cfg.f_floor > 0.0)) throw RangeError("f_floor", "must be positive");
    if (!(cfg.dt_min > 0.0)) throw RangeError("dt_min", "must be positive");
    if (!(cfg.dt_max >= cfg.dt_min)) throw RangeError("dt_max", "must be at least dt_min");
    if (cfg.sample_interval < 0.0) throw RangeError("sample_interval", "must be non-negative");
    if (cfg.snapshot_interval < 0.0) throw RangeError("snapshot_interval", "must be non-negative");
    if (cfg.stepper != "euler" && cfg.stepper != "rk2")
        throw RangeError("stepper", "must be euler or rk2");
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    int line_no = 0;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (val.empty()) throw ParseError(line_no, "empty value for '" + key + "'");

        if (key == "family") cfg.family = val;
        else if (key == "p") cfg.p = parse_double(val, line_no);
        else if (key == "alpha") cfg.alpha = parse_double(val, line_no);
        else if (key == "C") cfg.C = parse_double(val, line_no);
        else if (key == "M") cfg.M = parse_double(val, line_no);
        else if (key == "m0") cfg.m0 = parse_double(val, line_no);
        else if (key == "delta") cfg.delta = parse_double(val, line_no);
        else if (key == "Nu") cfg.Nu = parse_size(val, line_no);
        else if (key == "Nf") cfg.Nf = parse_size(val, line_no);
        else if (key == "T") cfg.T = parse_double(val, line_no);
        else if (key == "q") cfg.q = parse_double(val, line_no);
        else if (key == "safety") cfg.safety = parse_double(val, line_no);
        else if (key == "u_cap") cfg.u_cap = parse_double(val, line_no);
        else if (key == "f_floor") cfg.f_floor = parse_double(val, line_no);
        else if (key == "dt_min") cfg.dt_min = parse_double(val, line_no);
        else if (key == "dt_max") cfg.dt_max = parse_double(val, line_no);
        else if (key == "sample_interval") cfg.sample_interval = parse_double(val, line_no);
        else if (key == "snapshot_interval") cfg.snapshot_interval = parse_double(val, line_no);
        else if (key == "stepper") cfg.stepper = val;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_size(val, line_no));
        else if (key == "out") cfg.out = val;
        else throw ParseError(line_no, "unknown key '" + key + "'");
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace splab
