#include "splab/primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splab/errors.hpp"

namespace splab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Workspace {
    std::vector<double> grad_v;  // N+1 faces
    std::vector<double> flux;    // N+1 faces
    double a_max = 0.0;
    double g_max = 0.0;

    void resize(std::size_t n) {
        grad_v.resize(n + 1);
        flux.resize(n + 1);
    }
};

void fill_grad_v(const GridField& u, double M, std::vector<double>& g) {
    const std::size_t n = u.count();
    const double h = u.h();
    g[0] = 0.0;
    double acc = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        acc += u.values[j - 1];
        g[j] = M * (static_cast<double>(j) * h) - h * acc;
    }
    g[n] = 0.0;
}

// rhs_i = (F_{i+1} - F_i)/h with F the combined face flux. Returns false when
// a cell is nonpositive or a value is not finite.
bool rhs_into(const GridField& u, const DiffusionSpec& spec, double M,
              Workspace& ws, std::vector<double>& out) {
    const std::size_t n = u.count();
    const double h = u.h();
    const double inv_h = 1.0 / h;
    for (double v : u.values)
        if (!(v > 0.0) || !std::isfinite(v)) return false;
    fill_grad_v(u, M, ws.grad_v);
    ws.flux[0] = 0.0;
    ws.flux[n] = 0.0;
    double a_max = 0.0, g_max = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double ul = u.values[j - 1];
        const double ur = u.values[j];
        const double av = a_value(spec, 0.5 * (ul + ur));
        const double c = ws.grad_v[j];  // drift velocity of u
        const double upw = (c > 0.0) ? ul : ur;
        ws.flux[j] = av * (ur - ul) * inv_h - upw * c;
        a_max = std::max(a_max, av);
        g_max = std::max(g_max, std::abs(c));
    }
    ws.a_max = a_max;
    ws.g_max = g_max;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (ws.flux[i + 1] - ws.flux[i]) * inv_h;
    return true;
}

}  // namespace

std::vector<double> grad_v_faces(const GridField& u, double M) {
    std::vector<double> g(u.count() + 1);
    fill_grad_v(u, M, g);
    return g;
}

GridField reconstruct_v(const GridField& u, double M) {
    const auto g = grad_v_faces(u, M);
    GridField v;
    v.domain_length = u.domain_length;
    v.values.resize(u.count());
    const double h = u.h();
    v.values[0] = 0.0;
    for (std::size_t i = 1; i < u.count(); ++i)
        v.values[i] = v.values[i - 1] + h * g[i];
    const double m = mean(v);
    for (double& x : v.values) x -= m;
    return v;
}

GridField primal_rhs(const GridField& u, const DiffusionLaw& law, double M) {
    for (double v : u.values)
        if (!(v > 0.0)) throw NonPositiveCell("primal_rhs: u must be positive cellwise");
    Workspace ws;
    ws.resize(u.count());
    GridField out;
    out.domain_length = u.domain_length;
    out.values.resize(u.count());
    if (!rhs_into(u, law.spec(), M, ws, out.values))
        throw NonPositiveCell("primal_rhs: u must be positive cellwise");
    return out;
}

PrimalOutcome primal_run(const GridField& u0, const DiffusionLaw& law,
                         const PrimalConfig& cfg) {
    if (!is_valid(u0)) throw Error("primal_run: initial field invalid (need >= 8 finite cells)");
    for (double v : u0.values)
        if (!(v > 0.0)) throw NonPositiveCell("primal_run: u0 must be positive");

    const DiffusionSpec& spec = law.spec();
    const std::size_t n = u0.count();
    const double h = u0.h();
    const double M = mean(u0);
    const double sample_dt = cfg.sample_interval > 0.0 ? cfg.sample_interval : cfg.T / 1000.0;

    PrimalOutcome out;
    out.series.M = M;
    out.series.m0 = min_value(u0);
    out.series.sup0 = max_value(u0);
    out.series.q = cfg.q;

    GridField u = u0;
    Workspace ws;
    ws.resize(n);
    std::vector<double> k1(n), k2(n);
    GridField ustar = u0;

    double t = 0.0;
    double last_dt = 0.0;

    const auto record = [&](double dt_now) {
        const auto env = envelope(t, out.series.m0, M, out.series.sup0);
        out.series.samples.push_back({t, min_value(u), max_value(u), mass(u),
                                      kNaN, virial_Lq(u, cfg.q), env.sigma,
                                      env.Sigma ? *env.Sigma : kNaN, dt_now});
        if (cfg.record_fields) out.fields.push_back(u);
    };

    record(0.0);
    double next_sample = sample_dt;

    // Advances u by dt using the already computed slope k1; leaves u untouched
    // on failure so the caller can retry with a smaller step.
    const auto step_ok = [&](double dt) -> bool {
        for (std::size_t i = 0; i < n; ++i) ustar.values[i] = u.values[i] + dt * k1[i];
        for (double v : ustar.values)
            if (!(v > 0.0) || !std::isfinite(v)) return false;
        if (cfg.stepper == PrimalConfig::Stepper::euler) {
            u.values.swap(ustar.values);
            return true;
        }
        if (!rhs_into(ustar, spec, M, ws, k2)) return false;
        for (std::size_t i = 0; i < n; ++i)
            ustar.values[i] = u.values[i] + 0.5 * dt * (k1[i] + k2[i]);
        for (double v : ustar.values)
            if (!(v > 0.0) || !std::isfinite(v)) return false;
        u.values.swap(ustar.values);
        return true;
    };

    while (t < cfg.T * (1.0 - 1e-15)) {
        // dt controller: parabolic stability, drift CFL, and a growth-rate cap
        // so the step keeps shrinking once the degenerate diffusion no longer
        // limits it near blow-up.
        if (!rhs_into(u, spec, M, ws, k1)) {
            out.status = PrimalStatus::step_failure;
            out.t_end = t;
            out.u_final = u;
            record(last_dt);
            return out;
        }
        const double umax = max_value(u);
        const double dt_stab = h * h / (2.0 * ws.a_max + h * ws.g_max + 1e-300);
        const double dt_grow = 1.0 / (M + 2.0 * umax);
        double dt = cfg.safety * std::min({dt_stab, dt_grow, cfg.dt_max});
        if (dt < cfg.dt_min) {
            out.status = PrimalStatus::blow_up;
            out.t_end = t;
            out.u_final = u;
            record(dt);
            return out;
        }
        while (next_sample <= t + 1e-15 * (1.0 + t)) next_sample += sample_dt;
        dt = std::min({dt, next_sample - t, cfg.T - t});

        if (!step_ok(dt)) {
            dt *= 0.5;  // one retry at half the step
            if (!step_ok(dt)) {
                out.status = PrimalStatus::step_failure;
                out.t_end = t;
                out.u_final = u;
                record(dt);
                return out;
            }
        }
        t += dt;
        last_dt = dt;

        if (max_value(u) > cfg.u_cap) {
            out.status = PrimalStatus::blow_up;
            out.t_end = t;
            out.u_final = u;
            record(dt);
            return out;
        }
        if (t >= next_sample - 1e-12 * (1.0 + t)) {
            record(dt);
            next_sample += sample_dt;
        }
    }
    out.status = PrimalStatus::reached_horizon;
    out.t_end = t;
    out.u_final = u;
    if (out.series.samples.empty() || out.series.samples.back().t < t * (1.0 - 1e-15))
        record(last_dt);
    return out;
}

}  // namespace splab
