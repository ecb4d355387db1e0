#pragma once

#include <vector>

#include "splab/diagnostics.hpp"
#include "splab/grid.hpp"
#include "splab/nonlinearity.hpp"

namespace splab {

struct TransformedConfig {
    double T = 10.0;
    double safety = 0.4;
    double f_floor = 1e-8;
    double dt_min = 1e-14;
    double dt_max = 1e-2;
    double sample_interval = 0.0;  // 0 selects T/1000
    bool record_fields = false;
};

/// rhs_i = (psi(f_{i+1}) - 2 psi(f_i) + psi(f_{i-1}))/h^2 - 1 + M f_i with
/// ghost-cell reflection at both ends (M = domain length of f).
/// Throws NonPositiveCell.
GridField transformed_rhs(const GridField& f, const DiffusionLaw& law);

struct StepInfo {
    double dt_used = 0.0;
    bool fallback = false;  // explicit path taken
};

/// One time step: semi-implicit solve with psi linearized about f^n (a single
/// tridiagonal system); falls back to an explicit step bounded by the
/// parabolic limit when the solve yields a nonpositive cell. Throws
/// StepFailureError when both paths fail. May advance by less than dt; the
/// actual increment is returned.
StepInfo transformed_step(GridField& f, const DiffusionLaw& law, double dt,
                          double safety = 0.4);

enum class TransformedStatus { reached_horizon, touch_down, step_failure };

struct TouchdownOutcome {
    TransformedStatus status = TransformedStatus::reached_horizon;
    double t_end = 0.0;
    RunRecord series;
    GridField f_final;
    std::vector<GridField> fields;  // populated when record_fields is set
};

/// Integrates to the horizon or stops with TouchDown once min f < f_floor.
/// Requires integral(f0) = 1 within 1e-8.
TouchdownOutcome transformed_run(const GridField& f0, const DiffusionLaw& law,
                                 const TransformedConfig& cfg);

}  // namespace splab
