#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "splab/grid.hpp"
#include "splab/nonlinearity.hpp"

namespace splab {

/// Per-sample diagnostics recorded along a run. Lyapunov and virial columns
/// hold NaN where they do not apply (L_or_L1 on primal runs, Lq and the
/// envelopes on transformed runs).
struct RunRecord {
    struct Sample {
        double t;
        double min_v;
        double max_v;
        double mass;
        double L_or_L1;
        double Lq;
        double sigma;
        double Sigma;  // NaN once t >= 1/sup_u0
        double dt;
    };
    double M = 0.0;
    double m0 = 0.0;     // min of the initial field (primal runs)
    double sup0 = 0.0;   // max of the initial field (primal runs)
    double q = 3.0;
    std::vector<Sample> samples;
};

/// L(f) = int (|d_y log f|^2 / 2 + log f) dy; defined for the 1/r family only.
double lyapunov_L(const GridField& f, const DiffusionLaw& law);

/// L1(f) = int |d_y psi(f)|^2 / 2 dy + int (psi(f) - M psi1(f)) dy on [0,M].
double lyapunov_L1(const GridField& f, const DiffusionLaw& law);

/// E(g) = int (|d_y g|^2 / 2 + g) dy.
double energy_E(const GridField& g);

/// E1(h) = |d_y h|_2^2 / 2 + int_{h<0} h dy.
double energy_E1(const GridField& h);

struct IneqCheck {
    double lhs_energy, rhs_energy;   // energy lower bound, lhs >= rhs
    double lhs_norm, rhs_norm;       // L1-norm upper bound, lhs <= rhs
    bool energy_ok, norm_ok;
    bool ok() const { return energy_ok && norm_ok; }
};

/// Shifts g so that <e^g> = 1/M exactly on the grid, then evaluates both
/// inequalities of the constrained energy bound (tolerance 1e-8*(1+|rhs|)).
IneqCheck check_prop23(GridField g, double M);

/// Shifts h by the scalar root of c -> int psi_inv(h+c) - 1, then evaluates
/// the psi-version of the bounds. Throws OutOfRange when no admissible shift
/// exists inside range(psi).
IneqCheck check_lab1(GridField h, const DiffusionLaw& law, double M);

/// Aggregate of a randomized suite; matches the JSON report schema.
struct IneqReport {
    std::size_t checked = 0;
    struct Violation {
        std::size_t index;
        double lhs, rhs;
    };
    std::vector<Violation> violations;
};

IneqReport run_prop23_suite(double M, std::size_t trials, std::size_t grid_n,
                            std::uint64_t seed);
IneqReport run_lab1_suite(const DiffusionLaw& law, double M, std::size_t trials,
                          std::size_t grid_n, std::uint64_t seed);

struct EnvelopeBounds {
    double sigma;
    std::optional<double> Sigma;  // empty once t >= 1/sup_u0
};

/// Comparison-principle barriers: sigma(t) = M m0 / (m0 + e^{Mt} (M - m0)),
/// Sigma(t) = sup_u0 / (1 - sup_u0 t) for t < 1/sup_u0.
EnvelopeBounds envelope(double t, double m0, double M, double sup_u0);

/// ||U||_q^q / q with U the indefinite integral of u at cell centers.
/// Throws BadExponent for q <= 2.
double virial_Lq(const GridField& u, double q);

/// The virial comparison function; requires a concave majorant (NoMajorant).
double Lambda_M(double r, double q, double M, const DiffusionLaw& law);

/// Smallest positive root of Lambda_M, located by geometric bracket growth
/// from 1e-12 and bisection. Throws NoRoot when Lambda_M(1e-12) >= 0.
double theta_M(double q, double M, const DiffusionLaw& law);

struct MonotonicityReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_gap = 0.0;  // max of lhs - rhs over intervals (negative when clean)
    bool ok() const { return violations == 0; }
};

/// Checks d(Lq)/dt <= Lambda_M(Lq) between consecutive samples of a primal
/// run, with additive tolerance 1e-3*(1+|Lambda|) + 10h.
MonotonicityReport virial_monotonicity(const RunRecord& run, double q,
                                       const DiffusionLaw& law, double grid_h);

/// Checks that a recorded scalar column is non-increasing with per-step
/// tolerance tol_scale*(1+|value|).
MonotonicityReport check_nonincreasing(const std::vector<double>& t,
                                       const std::vector<double>& v,
                                       double tol_scale = 1e-8);

struct StabilityReport {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t first_violation = 0;
    double worst_ratio = 0.0;  // max over samples of d(t) / (e^{Mt} d(0))
};

/// L1-contraction bound between two recorded trajectories on the same grid:
/// |f1(t)-f2(t)|_1 <= (1 + 50h) e^{Mt} |f1(0)-f2(0)|_1 at shared samples.
StabilityReport stability_L1(const std::vector<double>& times,
                             const std::vector<GridField>& run_a,
                             const std::vector<GridField>& run_b, double M);

/// u0(x) = m0 + A exp(-((x-1)/delta)^2) with A fixing the discrete mean to M.
GridField bump_initial_data(double M, double m0, double delta, std::size_t N);

}  // namespace splab
