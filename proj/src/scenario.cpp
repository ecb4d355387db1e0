#include "splab/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "splab/diagnostics.hpp"
#include "splab/errors.hpp"
#include "splab/transform.hpp"

namespace splab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using nlohmann::json;

const char* status_name(PrimalStatus s) {
    switch (s) {
        case PrimalStatus::reached_horizon: return "ReachedHorizon";
        case PrimalStatus::blow_up: return "BlowUp";
        case PrimalStatus::step_failure: return "StepFailure";
    }
    return "?";
}

const char* status_name(TransformedStatus s) {
    switch (s) {
        case TransformedStatus::reached_horizon: return "ReachedHorizon";
        case TransformedStatus::touch_down: return "TouchDown";
        case TransformedStatus::step_failure: return "StepFailure";
    }
    return "?";
}

void write_diagnostics_csv(const std::filesystem::path& path, const RunRecord& rec) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,min_field,max_field,mass,L_or_L1,Lq,sigma,Sigma,dt\n";
    for (const auto& s : rec.samples) {
        out << format_g17(s.t) << ',' << format_g17(s.min_v) << ',' << format_g17(s.max_v)
            << ',' << format_g17(s.mass) << ',' << format_g17(s.L_or_L1) << ','
            << format_g17(s.Lq) << ',' << format_g17(s.sigma) << ',' << format_g17(s.Sigma)
            << ',' << format_g17(s.dt) << '\n';
    }
}

/// Indices of the recorded samples closest to multiples of `interval`.
std::vector<std::size_t> snapshot_indices(const std::vector<double>& times,
                                          double interval) {
    std::vector<std::size_t> idx;
    if (times.empty()) return idx;
    double target = 0.0;
    std::size_t i = 0;
    while (i < times.size()) {
        while (i + 1 < times.size() &&
               std::abs(times[i + 1] - target) <= std::abs(times[i] - target))
            ++i;
        idx.push_back(i);
        target += interval;
        if (target > times.back() + 0.5 * interval) break;
        while (i + 1 < times.size() && times[i] < target - 0.5 * interval) ++i;
    }
    if (idx.back() != times.size() - 1) idx.push_back(times.size() - 1);
    return idx;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const std::filesystem::path& out_dir) {
    validate(cfg);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const DiffusionLaw law(cfg.diffusion());
    const GridField u0 = bump_initial_data(cfg.M, cfg.m0, cfg.delta, cfg.Nu);

    PrimalConfig pc;
    pc.T = cfg.T;
    pc.q = cfg.q;
    pc.safety = cfg.safety;
    pc.u_cap = cfg.u_cap;
    pc.dt_min = cfg.dt_min;
    pc.dt_max = cfg.dt_max;
    pc.sample_interval = cfg.sample_interval;
    pc.stepper = cfg.stepper == "euler" ? PrimalConfig::Stepper::euler
                                        : PrimalConfig::Stepper::rk2;
    pc.record_fields = true;

    TransformedConfig tc;
    tc.T = cfg.T;
    tc.safety = cfg.safety;
    tc.f_floor = cfg.f_floor;
    tc.dt_min = cfg.dt_min;
    tc.dt_max = cfg.dt_max;
    tc.sample_interval = cfg.sample_interval;
    tc.record_fields = true;

    ScenarioResult res;
    res.primal = primal_run(u0, law, pc);
    const GridField f0 = u_to_f(u0, cfg.Nf);
    res.transformed = transformed_run(f0, law, tc);

    write_diagnostics_csv(out_dir / "primal_diagnostics.csv", res.primal.series);
    write_diagnostics_csv(out_dir / "transformed_diagnostics.csv", res.transformed.series);

    const double snap_dt = cfg.snapshot_interval > 0.0 ? cfg.snapshot_interval : cfg.T / 10.0;
    {
        std::ofstream out(out_dir / "primal_snapshots.csv");
        if (!out) throw IoError("cannot write primal_snapshots.csv");
        out << "t,x,u,v\n";
        std::vector<double> times;
        times.reserve(res.primal.series.samples.size());
        for (const auto& s : res.primal.series.samples) times.push_back(s.t);
        for (std::size_t k : snapshot_indices(times, snap_dt)) {
            const GridField& u = res.primal.fields[k];
            const GridField v = reconstruct_v(u, res.primal.series.M);
            for (std::size_t i = 0; i < u.count(); ++i)
                out << format_g17(times[k]) << ',' << format_g17(u.cell_center(i)) << ','
                    << format_g17(u.values[i]) << ',' << format_g17(v.values[i]) << '\n';
        }
    }
    {
        std::ofstream out(out_dir / "transformed_snapshots.csv");
        if (!out) throw IoError("cannot write transformed_snapshots.csv");
        out << "t,y,f,Psi_f\n";
        std::vector<double> times;
        times.reserve(res.transformed.series.samples.size());
        for (const auto& s : res.transformed.series.samples) times.push_back(s.t);
        for (std::size_t k : snapshot_indices(times, snap_dt)) {
            const GridField& f = res.transformed.fields[k];
            for (std::size_t i = 0; i < f.count(); ++i)
                out << format_g17(times[k]) << ',' << format_g17(f.cell_center(i)) << ','
                    << format_g17(f.values[i]) << ','
                    << format_g17(law.psi(f.values[i])) << '\n';
        }
    }

    json summary;
    summary["outcome_primal"] = status_name(res.primal.status);
    summary["outcome_transformed"] = status_name(res.transformed.status);
    summary["t_blowup"] = res.primal.status == PrimalStatus::blow_up
                              ? json(res.primal.t_end) : json(nullptr);
    summary["t_touchdown"] = res.transformed.status == TransformedStatus::touch_down
                                 ? json(res.transformed.t_end) : json(nullptr);
    summary["Lq0"] = virial_Lq(u0, cfg.q);

    json monot;
    {
        std::vector<double> ts, Ls;
        for (const auto& s : res.transformed.series.samples) {
            ts.push_back(s.t);
            Ls.push_back(s.L_or_L1);
        }
        const auto rep = check_nonincreasing(ts, Ls);
        monot["lyapunov"] = {{"checked", rep.checked}, {"violations", rep.violations}};
    }
    if (law.has_majorant()) {
        try {
            summary["theta_M"] = theta_M(cfg.q, cfg.M, law);
        } catch (const NoRoot&) {
            summary["theta_M"] = nullptr;
        }
        const auto rep = virial_monotonicity(res.primal.series, cfg.q, law, u0.h());
        monot["virial"] = {{"checked", rep.checked}, {"violations", rep.violations}};
    } else {
        summary["theta_M"] = nullptr;
        monot["virial"] = nullptr;
    }
    summary["monotonicity_reports"] = monot;

    res.summary_json = summary.dump(2) + "\n";
    {
        std::ofstream out(out_dir / "summary.json");
        if (!out) throw IoError("cannot write summary.json");
        out << res.summary_json;
    }

    if (res.primal.status == PrimalStatus::step_failure ||
        res.transformed.status == TransformedStatus::step_failure)
        res.exit_code = 2;
    return res;
}

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<double>& values, unsigned jobs,
                  const std::filesystem::path& out_dir) {
    if (axis != "p" && axis != "alpha" && axis != "delta" && axis != "m0")
        throw RangeError("axis", "must be one of p, alpha, delta, m0");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    SweepResult result;
    result.rows.resize(values.size());

    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= values.size()) return;
            ScenarioConfig cfg = base;
            const double v = values[i];
            if (axis == "p") { cfg.family = "power"; cfg.p = v; }
            else if (axis == "alpha") { cfg.family = "log"; cfg.alpha = v; }
            else if (axis == "delta") cfg.delta = v;
            else cfg.m0 = v;

            SweepRow row;
            row.axis_value = v;
            row.t_singular = kNaN;
            row.theta = kNaN;
            char label[64];
            std::snprintf(label, sizeof(label), "%s=%g", axis.c_str(), v);
            try {
                const auto res = run_scenario(cfg, out_dir / label);
                row.Lq0 = virial_Lq(bump_initial_data(cfg.M, cfg.m0, cfg.delta, cfg.Nu), cfg.q);
                const DiffusionLaw law(cfg.diffusion());
                if (law.has_majorant()) {
                    try {
                        row.theta = theta_M(cfg.q, cfg.M, law);
                    } catch (const NoRoot&) {}
                }
                const bool pb = res.primal.status == PrimalStatus::blow_up;
                const bool td = res.transformed.status == TransformedStatus::touch_down;
                if (res.exit_code != 0) {
                    row.outcome = "FAILED";
                } else if (pb || td) {
                    row.outcome = "singular";
                    row.t_singular = pb ? res.primal.t_end : res.transformed.t_end;
                    if (pb && td) row.t_singular = std::min(res.primal.t_end, res.transformed.t_end);
                } else {
                    row.outcome = "global";
                }
            } catch (const std::exception&) {
                row.outcome = "FAILED";
            }
            result.rows[i] = row;
        }
    };

    const unsigned nthreads = std::max(1u, jobs);
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nthreads && k < values.size(); ++k)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ofstream out(out_dir / "sweep.csv");
    if (!out) throw IoError("cannot write sweep.csv");
    out << "axis_value,outcome,t_singular,Lq0,theta_M\n";
    bool any_ok = values.empty();
    for (const auto& row : result.rows) {
        if (row.outcome != "FAILED") any_ok = true;
        out << format_g17(row.axis_value) << ',' << row.outcome << ','
            << format_g17(row.t_singular) << ',' << format_g17(row.Lq0) << ','
            << format_g17(row.theta) << '\n';
    }
    result.exit_code = any_ok ? 0 : 2;
    return result;
}

}  // namespace splab
