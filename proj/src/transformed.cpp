#include "splab/transformed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splab/errors.hpp"
#include "splab/numerics.hpp"

namespace splab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRelChange = 0.05;  // max relative cell change per step

struct Workspace {
    std::vector<double> psi_v, dpsi, rhs, lower, diag, upper, trial;

    void resize(std::size_t n) {
        psi_v.resize(n);
        dpsi.resize(n);
        rhs.resize(n);
        lower.resize(n - 1);
        diag.resize(n);
        upper.resize(n - 1);
        trial.resize(n);
    }
};

void fill_rhs(const GridField& f, const DiffusionLaw& law, Workspace& ws) {
    const std::size_t n = f.count();
    const double M = f.domain_length;
    const double inv_h2 = 1.0 / (f.h() * f.h());
    for (std::size_t i = 0; i < n; ++i) ws.psi_v[i] = law.psi_fast(f.values[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = (i == 0) ? ws.psi_v[0] : ws.psi_v[i - 1];
        const double right = (i == n - 1) ? ws.psi_v[n - 1] : ws.psi_v[i + 1];
        ws.rhs[i] = (right - 2.0 * ws.psi_v[i] + left) * inv_h2 - 1.0 + M * f.values[i];
    }
}

bool attempt_semi_implicit(GridField& f, const DiffusionLaw& law, double dt,
                           Workspace& ws) {
    const std::size_t n = f.count();
    const double c = dt / (f.h() * f.h());
    const DiffusionSpec& spec = law.spec();
    for (std::size_t i = 0; i < n; ++i) ws.dpsi[i] = psi_prime_value(spec, f.values[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const double side = (i == 0 || i == n - 1) ? 1.0 : 2.0;
        ws.diag[i] = 1.0 + side * c * ws.dpsi[i];
        ws.trial[i] = dt * ws.rhs[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        ws.lower[i] = -c * ws.dpsi[i];      // row i+1, column i
        ws.upper[i] = -c * ws.dpsi[i + 1];  // row i, column i+1
    }
    std::vector<double> w;
    try {
        w = tridiag_solve(ws.lower, ws.diag, ws.upper, ws.trial);
    } catch (const SingularSystem&) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f.values[i] + w[i];
        if (!(v > 0.0) || !std::isfinite(v)) return false;
        ws.trial[i] = v;
    }
    f.values.swap(ws.trial);
    return true;
}

}  // namespace

GridField transformed_rhs(const GridField& f, const DiffusionLaw& law) {
    for (double v : f.values)
        if (!(v > 0.0)) throw NonPositiveCell("transformed_rhs: f must be positive cellwise");
    Workspace ws;
    ws.resize(f.count());
    fill_rhs(f, law, ws);
    GridField out;
    out.domain_length = f.domain_length;
    out.values = std::move(ws.rhs);
    return out;
}

StepInfo transformed_step(GridField& f, const DiffusionLaw& law, double dt,
                          double safety) {
    for (double v : f.values)
        if (!(v > 0.0)) throw NonPositiveCell("transformed_step: f must be positive cellwise");
    Workspace ws;
    ws.resize(f.count());
    fill_rhs(f, law, ws);
    if (attempt_semi_implicit(f, law, dt, ws)) return {dt, false};
    // Explicit fallback at the parabolic limit of the frozen coefficients.
    double dpsi_max = 0.0;
    const DiffusionSpec& spec = law.spec();
    for (double v : f.values) dpsi_max = std::max(dpsi_max, psi_prime_value(spec, v));
    const double h = f.h();
    const double dt_e = std::min(dt, safety * h * h / (2.0 * dpsi_max + 1e-300));
    for (std::size_t i = 0; i < f.count(); ++i) {
        const double v = f.values[i] + dt_e * ws.rhs[i];
        if (!(v > 0.0) || !std::isfinite(v))
            throw StepFailureError("transformed_step: both step paths lost positivity");
        ws.trial[i] = v;
    }
    f.values.swap(ws.trial);
    return {dt_e, true};
}

TouchdownOutcome transformed_run(const GridField& f0, const DiffusionLaw& law,
                                 const TransformedConfig& cfg) {
    if (!is_valid(f0)) throw Error("transformed_run: initial field invalid");
    for (double v : f0.values)
        if (!(v > 0.0)) throw NonPositiveCell("transformed_run: f0 must be positive");
    if (std::abs(mass(f0) - 1.0) > 1e-8)
        throw MassDefect("transformed_run: integral of f0 must be 1 within 1e-8");

    const std::size_t n = f0.count();
    const double h = f0.h();
    const double sample_dt = cfg.sample_interval > 0.0 ? cfg.sample_interval : cfg.T / 1000.0;
    const bool use_L = law.spec().family == Family::inverse_r;

    law.prebuild_cache(std::max(cfg.f_floor * 0.1, 1e-12), 4.0 * max_value(f0));

    TouchdownOutcome out;
    out.series.M = f0.domain_length;
    out.series.m0 = min_value(f0);
    out.series.sup0 = max_value(f0);

    GridField f = f0;
    Workspace ws;
    ws.resize(n);

    double t = 0.0;
    double last_dt = 0.0;

    const auto record = [&](double dt_now) {
        out.series.samples.push_back({t, min_value(f), max_value(f), mass(f),
                                      use_L ? lyapunov_L(f, law) : lyapunov_L1(f, law),
                                      kNaN, kNaN, kNaN, dt_now});
        if (cfg.record_fields) out.fields.push_back(f);
    };

    record(0.0);
    double next_sample = sample_dt;

    while (true) {
        if (min_value(f) < cfg.f_floor) {
            out.status = TransformedStatus::touch_down;
            break;
        }
        if (t >= cfg.T * (1.0 - 1e-15)) {
            out.status = TransformedStatus::reached_horizon;
            break;
        }
        fill_rhs(f, law, ws);
        double dt = std::min(cfg.dt_max, cfg.safety * h);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::abs(ws.rhs[i]);
            if (r > 0.0) dt = std::min(dt, kRelChange * f.values[i] / r);
        }
        if (dt < cfg.dt_min) {
            out.status = TransformedStatus::step_failure;
            break;
        }
        while (next_sample <= t + 1e-15 * (1.0 + t)) next_sample += sample_dt;
        dt = std::min({dt, next_sample - t, cfg.T - t});

        // Step with the rhs already in the workspace (the controller filled it).
        double dt_used = dt;
        if (!attempt_semi_implicit(f, law, dt, ws)) {
            double dpsi_max = 0.0;
            for (double v : f.values)
                dpsi_max = std::max(dpsi_max, psi_prime_value(law.spec(), v));
            const double dt_e = std::min(dt, cfg.safety * h * h / (2.0 * dpsi_max + 1e-300));
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = f.values[i] + dt_e * ws.rhs[i];
                if (!(v > 0.0) || !std::isfinite(v)) {
                    ok = false;
                    break;
                }
                ws.trial[i] = v;
            }
            if (!ok) {
                out.status = TransformedStatus::step_failure;
                break;
            }
            f.values.swap(ws.trial);
            dt_used = dt_e;
        }
        t += dt_used;
        last_dt = dt_used;

        if (t >= next_sample - 1e-12 * (1.0 + t)) {
            record(dt_used);
            next_sample += sample_dt;
        }
    }
    out.t_end = t;
    out.f_final = f;
    if (out.series.samples.empty() || out.series.samples.back().t < t * (1.0 - 1e-15))
        record(last_dt);
    return out;
}

}  // namespace splab
