#pragma once

#include <vector>

#include "splab/diagnostics.hpp"
#include "splab/grid.hpp"
#include "splab/nonlinearity.hpp"

namespace splab {

struct PrimalConfig {
    double T = 10.0;
    double q = 3.0;
    double safety = 0.4;
    double u_cap = 1e8;
    double dt_min = 1e-14;
    double dt_max = 1e-2;
    double sample_interval = 0.0;  // 0 selects T/1000
    enum class Stepper { euler, rk2 } stepper = Stepper::rk2;
    bool record_fields = false;
};

/// d_x v at the N+1 faces via the exact identity d_x v = M x - U(x), with the
/// two boundary faces pinned to exactly zero.
std::vector<double> grad_v_faces(const GridField& u, double M);

/// Potential with mean zero, built by integrating grad_v_faces across cells.
/// Interior second differences satisfy v'' + u - M = 0 identically.
GridField reconstruct_v(const GridField& u, double M);

/// Flux-difference right-hand side for d_t u = d_x(a(u) d_x u - u d_x v):
/// centered diffusive flux with arithmetic face means, advective flux upwinded
/// by the drift direction, no-flux boundary faces. Throws NonPositiveCell.
GridField primal_rhs(const GridField& u, const DiffusionLaw& law, double M);

enum class PrimalStatus { reached_horizon, blow_up, step_failure };

struct PrimalOutcome {
    PrimalStatus status = PrimalStatus::reached_horizon;
    double t_end = 0.0;  // horizon, blow-up, or failure time
    RunRecord series;
    GridField u_final;
    std::vector<GridField> fields;  // populated when record_fields is set
};

/// Explicit adaptive integration of the coupled system with blow-up
/// detection: BlowUp once the sup norm exceeds u_cap or dt falls below
/// dt_min; StepFailure when a step yields NaN or nonpositive cells even
/// after one retry at dt/2.
PrimalOutcome primal_run(const GridField& u0, const DiffusionLaw& law,
                         const PrimalConfig& cfg);

}  // namespace splab
