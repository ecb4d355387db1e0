#pragma once

#include <cstddef>
#include <vector>

namespace splab {

/// Cell-averaged scalar field on a uniform 1-D grid over [0, domain_length].
/// Cell i covers [i*h, (i+1)*h) with h = domain_length / count; its center is
/// (i + 1/2)*h. Fluxes and indefinite integrals live on the count+1 faces.
struct GridField {
    std::vector<double> values;
    double domain_length = 1.0;

    std::size_t count() const { return values.size(); }
    double h() const { return domain_length / static_cast<double>(values.size()); }
    double cell_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h(); }

    static GridField constant(std::size_t n, double length, double value) {
        return GridField{std::vector<double>(n, value), length};
    }
};

/// True when the field has at least 8 cells and only finite entries.
bool is_valid(const GridField& g);

double min_value(const GridField& g);
double max_value(const GridField& g);

/// h * sum(values): the discrete integral over the domain.
double mass(const GridField& g);

/// mass / domain_length.
double mean(const GridField& g);

double norm_l1(const GridField& g);
double norm_l2_sq(const GridField& g);
double norm_inf(const GridField& g);

/// Face values of the indefinite integral: face j carries h * sum(values[0..j)).
/// Exact for cell-averaged data; first entry 0, last entry mass(g).
std::vector<double> cumsum_midpoint(const GridField& g);

/// Indefinite integral evaluated at cell centers (mean of adjacent faces).
std::vector<double> cumsum_at_centers(const GridField& g);

/// Cellwise derivative: central differences in the interior, one-sided at the
/// two boundary cells.
std::vector<double> cell_derivative(const GridField& g);

/// h * sum of squared cell derivatives.
double grad_norm_sq(const GridField& g);

}  // namespace splab
