#include "splab/transform.hpp"

#include <cmath>

#include "splab/errors.hpp"

namespace splab {

namespace {

/// Averages a piecewise-constant function, given by breakpoints (size n+1)
/// and values (size n), onto n_out uniform cells covering [0, length].
/// Content beyond the last breakpoint is extended with the last value.
std::vector<double> average_onto(const std::vector<double>& breaks,
                                 const std::vector<double>& vals,
                                 std::size_t n_out, double length) {
    std::vector<double> acc(n_out, 0.0);
    const double h = length / static_cast<double>(n_out);
    std::size_t k = 0;  // output cell
    double cell_hi = h;
    for (std::size_t j = 0; j < vals.size() && k < n_out; ++j) {
        double seg_lo = breaks[j];
        double seg_hi = (j + 1 == vals.size()) ? std::max(breaks[j + 1], length)
                                               : breaks[j + 1];
        while (k < n_out && seg_hi > seg_lo) {
            const double lo = std::max(seg_lo, cell_hi - h);
            const double hi = std::min(seg_hi, cell_hi);
            if (hi > lo) acc[k] += (hi - lo) * vals[j];
            if (seg_hi >= cell_hi) {
                ++k;
                cell_hi = h * static_cast<double>(k + 1);
            } else {
                break;
            }
        }
    }
    for (double& v : acc) v /= h;
    return acc;
}

void require_positive_cells(const GridField& g, const char* what) {
    for (double v : g.values)
        if (!(v > 0.0)) throw NonPositiveInput(std::string(what) + ": field must be positive");
}

}  // namespace

GridField u_to_f(const GridField& u, std::size_t Nf) {
    require_positive_cells(u, "u_to_f");
    const auto U = cumsum_midpoint(u);  // breakpoints in y
    const double M = U.back();
    std::vector<double> fvals(u.count());
    for (std::size_t j = 0; j < u.count(); ++j) fvals[j] = 1.0 / u.values[j];
    GridField f;
    f.domain_length = M;
    f.values = average_onto(U, fvals, Nf, M);
    return f;
}

FToUResult f_to_u(const GridField& f, std::size_t Nu) {
    require_positive_cells(f, "f_to_u");
    const auto F = cumsum_midpoint(f);  // breakpoints in x
    const double total = F.back();
    if (std::abs(total - 1.0) > 1e-6)
        throw MassDefect("f_to_u: integral of f is " + std::to_string(total));
    std::vector<double> uvals(f.count());
    for (std::size_t k = 0; k < f.count(); ++k) uvals[k] = 1.0 / f.values[k];
    FToUResult out;
    out.u.domain_length = 1.0;
    out.u.values = average_onto(F, uvals, Nu, 1.0);
    out.mass_defect = std::abs(total - 1.0);
    out.mean_defect = mean(out.u) - f.domain_length;
    return out;
}

}  // namespace splab
