#include "splab/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "splab/errors.hpp"

namespace splab {

namespace {

void require_positive_cells(const GridField& g, const char* what) {
    for (double v : g.values)
        if (!(v > 0.0)) throw NonPositiveInput(std::string(what) + ": field must be positive");
}
}  // namespace

double lyapunov_L(const GridField& f, const DiffusionLaw& law) {
    if (law.spec().family != Family::inverse_r)
        throw WrongFamily("lyapunov_L applies to the 1/r family only");
    require_positive_cells(f, "lyapunov_L");
    GridField logf = f;
    for (double& v : logf.values) v = std::log(v);
    double s = 0.0;
    for (double v : logf.values) s += v;
    return 0.5 * grad_norm_sq(logf) + f.h() * s;
}

double lyapunov_L1(const GridField& f, const DiffusionLaw& law) {
    require_positive_cells(f, "lyapunov_L1");
    const double M = f.domain_length;
    GridField psif = f;
    double s = 0.0;
    for (std::size_t i = 0; i < f.count(); ++i) {
        const double pf = law.psi_fast(f.values[i]);
        psif.values[i] = pf;
        s += pf - M * law.psi1_fast(f.values[i]);
    }
    return 0.5 * grad_norm_sq(psif) + f.h() * s;
}

double energy_E(const GridField& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return 0.5 * grad_norm_sq(g) + g.h() * s;
}

double energy_E1(const GridField& h) {
    double s = 0.0;
    for (double v : h.values) s += std::min(v, 0.0);
    return 0.5 * grad_norm_sq(h) + h.h() * s;
}

IneqCheck check_prop23(GridField g, double M) {
    // Shift so that the discrete constraint <e^g> = 1/M holds exactly.
    double s = 0.0;
    for (double v : g.values) s += std::exp(v);
    const double c = -std::log(g.h() * s);  // makes int e^{g+c} = 1
    for (double& v : g.values) v += c;

    IneqCheck r{};
    const double grad_sq = grad_norm_sq(g);
    r.lhs_energy = energy_E(g);
    r.rhs_energy = 0.25 * grad_sq - M * std::log(M) - M * M * M;
    r.energy_ok = r.lhs_energy >= r.rhs_energy - 1e-8 * (1.0 + std::abs(r.rhs_energy));
    r.lhs_norm = norm_l1(g);
    r.rhs_norm = 2.0 + M * std::log(M) + std::pow(M, 1.5) * std::sqrt(grad_sq);
    r.norm_ok = r.lhs_norm <= r.rhs_norm + 1e-8 * (1.0 + std::abs(r.rhs_norm));
    return r;
}

IneqCheck check_lab1(GridField h, const DiffusionLaw& law, double M) {
    const double hi_limit = law.psi_upper();
    const double hmax = max_value(h);
    const auto constraint = [&](double c) {
        double s = 0.0;
        for (double v : h.values) s += law.psi_inverse(v + c);
        return h.h() * s - 1.0;
    };
    // Bracket the shift. As c -> -inf the integral drops to 0 (range of psi is
    // unbounded below for the admissible families); as c approaches the upper
    // range limit at the max cell, the integral blows up.
    if (!(law.psi_lower() == -std::numeric_limits<double>::infinity()))
        throw OutOfRange("check_lab1: psi must be unbounded below to admit the shift");
    double guess = law.psi(1.0 / M) - mean(h);
    double lo = guess, hi = guess;
    const double cap = hi_limit - hmax;  // +inf when psi_upper is infinite
    if (std::isfinite(cap)) {
        lo = std::min(lo, cap - 1.0);
        hi = std::min(hi, cap - 1e-9 * (1.0 + std::abs(cap)));
    }
    double step = 1.0;
    while (constraint(lo) > 0.0) {
        lo -= step;
        step *= 2.0;
        if (step > 1e12) throw OutOfRange("check_lab1: no lower bracket for the shift");
    }
    step = 1.0;
    while (constraint(hi) < 0.0) {
        if (std::isfinite(cap)) {
            const double next = 0.5 * (hi + cap);
            if (!(next > hi)) throw OutOfRange("check_lab1: shift cannot reach the constraint");
            hi = next;
        } else {
            hi += step;
            step *= 2.0;
            if (step > 1e12) throw OutOfRange("check_lab1: no upper bracket for the shift");
        }
    }
    const double c = find_root_bracketed(constraint, lo, hi, 1e-12);
    for (double& v : h.values) v += c;

    IneqCheck r{};
    const double grad_sq = grad_norm_sq(h);
    const double psi_at = std::abs(law.psi(1.0 / M));
    r.lhs_energy = energy_E1(h);
    r.rhs_energy = 0.25 * grad_sq - M * M * M - M * psi_at;
    r.energy_ok = r.lhs_energy >= r.rhs_energy - 1e-8 * (1.0 + std::abs(r.rhs_energy));
    r.lhs_norm = norm_l1(h);
    r.rhs_norm = std::pow(M, 1.5) * std::sqrt(grad_sq) + M * psi_at;
    r.norm_ok = r.lhs_norm <= r.rhs_norm + 1e-8 * (1.0 + std::abs(r.rhs_norm));
    return r;
}

namespace {

/// Random piecewise-linear profile: 17 knots uniform in [-3,3] across [0,M],
/// interpolated at cell centers.
GridField random_profile(std::mt19937_64& rng, double M, std::size_t n) {
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    constexpr int kKnots = 17;
    std::array<double, kKnots> knot{};
    for (auto& v : knot) v = dist(rng);
    GridField g;
    g.domain_length = M;
    g.values.resize(n);
    const double dy = M / (kKnots - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = g.cell_center(i);
        const int j = std::min(static_cast<int>(y / dy), kKnots - 2);
        const double t = (y - j * dy) / dy;
        g.values[i] = (1.0 - t) * knot[j] + t * knot[j + 1];
    }
    return g;
}

}  // namespace

IneqReport run_prop23_suite(double M, std::size_t trials, std::size_t grid_n,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    IneqReport rep;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto g = random_profile(rng, M, grid_n);
        const auto c = check_prop23(g, M);
        ++rep.checked;
        if (!c.energy_ok) rep.violations.push_back({k, c.lhs_energy, c.rhs_energy});
        if (!c.norm_ok) rep.violations.push_back({k, c.lhs_norm, c.rhs_norm});
    }
    return rep;
}

IneqReport run_lab1_suite(const DiffusionLaw& law, double M, std::size_t trials,
                          std::size_t grid_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    IneqReport rep;
    for (std::size_t k = 0; k < trials; ++k) {
        const auto h = random_profile(rng, M, grid_n);
        const auto c = check_lab1(h, law, M);
        ++rep.checked;
        if (!c.energy_ok) rep.violations.push_back({k, c.lhs_energy, c.rhs_energy});
        if (!c.norm_ok) rep.violations.push_back({k, c.lhs_norm, c.rhs_norm});
    }
    return rep;
}

EnvelopeBounds envelope(double t, double m0, double M, double sup_u0) {
    EnvelopeBounds b;
    b.sigma = M * m0 / (m0 + std::exp(M * t) * (M - m0));
    if (t * sup_u0 < 1.0) b.Sigma = sup_u0 / (1.0 - sup_u0 * t);
    return b;
}

double virial_Lq(const GridField& u, double q) {
    if (!(q > 2.0)) throw BadExponent("virial exponent must exceed 2");
    const auto Uc = cumsum_at_centers(u);
    double s = 0.0;
    for (double v : Uc) s += std::pow(v, q);
    return u.h() * s / q;
}

double Lambda_M(double r, double q, double M, const DiffusionLaw& law) {
    if (!law.has_majorant()) throw NoMajorant("Lambda_M needs a concave majorant");
    if (!(r > 0.0)) throw NonPositiveArgument("Lambda_M: r must be positive");
    const double BM = law.majorant(M);
    const double mq = std::pow(M, q + 1.0) / (q + 1.0);
    const double coef = (q - 1.0) * std::pow(BM, 2.0 / q) * std::pow(mq, (q - 2.0) / q);
    const double arg = std::pow(M, q + 1.0) / (q * (q + 1.0) * r);
    return M * r + coef * std::pow(law.beta(arg), (q - 2.0) / q) -
           std::pow(M, q + 1.0) / (q * (q + 1.0));
}

double theta_M(double q, double M, const DiffusionLaw& law) {
    const auto lam = [&](double r) { return Lambda_M(r, q, M, law); };
    double lo = 1e-12;
    if (lam(lo) >= 0.0)
        throw NoRoot("Lambda_M(1e-12) >= 0: threshold not representable for " +
                     law.spec().name());
    double hi = lo;
    while (lam(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e30) throw NoRoot("Lambda_M never changes sign");
    }
    return find_root_bracketed(lam, hi / 2.0, hi, 1e-14);
}

MonotonicityReport virial_monotonicity(const RunRecord& run, double q,
                                       const DiffusionLaw& law, double grid_h) {
    if (!law.has_majorant()) throw NoMajorant("virial_monotonicity needs a concave majorant");
    MonotonicityReport rep;
    for (std::size_t k = 0; k + 1 < run.samples.size(); ++k) {
        const auto& s0 = run.samples[k];
        const auto& s1 = run.samples[k + 1];
        const double dtk = s1.t - s0.t;
        if (!(dtk > 0.0)) continue;
        const double rate = (s1.Lq - s0.Lq) / dtk;
        const double mid = 0.5 * (s0.Lq + s1.Lq);
        if (!(mid > 0.0)) continue;
        const double lam = Lambda_M(mid, q, run.M, law);
        const double tol = 1e-3 * (1.0 + std::abs(lam)) + 10.0 * grid_h;
        ++rep.checked;
        const double gap = rate - (lam + tol);
        rep.worst_gap = std::max(rep.worst_gap, gap);
        if (gap > 0.0) ++rep.violations;
    }
    return rep;
}

MonotonicityReport check_nonincreasing(const std::vector<double>& t,
                                       const std::vector<double>& v, double tol_scale) {
    MonotonicityReport rep;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        ++rep.checked;
        const double tol = tol_scale * (1.0 + std::abs(v[k]));
        const double gap = v[k + 1] - v[k] - tol;
        rep.worst_gap = std::max(rep.worst_gap, gap);
        if (gap > 0.0) ++rep.violations;
    }
    (void)t;
    return rep;
}

StabilityReport stability_L1(const std::vector<double>& times,
                             const std::vector<GridField>& run_a,
                             const std::vector<GridField>& run_b, double M) {
    StabilityReport rep;
    const std::size_t n = std::min({times.size(), run_a.size(), run_b.size()});
    if (n == 0) return rep;
    if (run_a[0].count() != run_b[0].count() ||
        std::abs(run_a[0].domain_length - run_b[0].domain_length) > 1e-12)
        throw GridMismatch("stability_L1: trajectories live on different grids");
    const double h = run_a[0].h();
    GridField diff = run_a[0];
    const auto l1 = [&](const GridField& a, const GridField& b) {
        for (std::size_t i = 0; i < diff.count(); ++i)
            diff.values[i] = a.values[i] - b.values[i];
        return norm_l1(diff);
    };
    const double d0 = l1(run_a[0], run_b[0]);
    for (std::size_t k = 0; k < n; ++k) {
        const double d = l1(run_a[k], run_b[k]);
        const double bound = (1.0 + 50.0 * h) * std::exp(M * (times[k] - times[0])) * d0;
        ++rep.checked;
        if (d0 > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, d / bound);
        if (d > bound + 1e-15) {
            if (rep.ok) rep.first_violation = k;
            rep.ok = false;
        }
    }
    return rep;
}

GridField bump_initial_data(double M, double m0, double delta, std::size_t N) {
    GridField u;
    u.domain_length = 1.0;
    u.values.resize(N);
    double gsum = 0.0;
    std::vector<double> g(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = u.cell_center(i);
        const double z = (x - 1.0) / delta;
        g[i] = std::exp(-z * z);
        gsum += g[i];
    }
    const double gmean = gsum / static_cast<double>(N);
    if (!(gmean > 0.0))
        throw Error("bump_initial_data: profile underflows for this delta and grid");
    const double A = (M - m0) / gmean;
    for (std::size_t i = 0; i < N; ++i) u.values[i] = m0 + A * g[i];
    return u;
}

}  // namespace splab
