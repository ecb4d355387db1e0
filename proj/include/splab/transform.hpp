#pragma once

#include "splab/grid.hpp"

namespace splab {

/// Maps a positive density u on [0,1] to f on [0,M], M = mass(u), through the
/// pseudo-inverse of the indefinite integral U: f(y) = 1/u(F(y)) where
/// U(F(y)) = y. The pullback of piecewise-constant u is piecewise constant in
/// y with breakpoints at the U faces, so cell values are exact interval
/// averages and the discrete integral of f equals 1 to roundoff.
GridField u_to_f(const GridField& u, std::size_t Nf);

struct FToUResult {
    GridField u;
    double mass_defect;  // |integral of f - 1|
    double mean_defect;  // mean(u) - M, reported, not corrected
};

/// Inverse map: F = indefinite integral of f, u(x) = 1/f(F^{-1}(x)).
/// Requires integral(f) = 1 within 1e-6 (MassDefect otherwise); the returned
/// u is not rescaled, the mean-M defect is reported instead.
FToUResult f_to_u(const GridField& f, std::size_t Nu);

}  // namespace splab
