#include "splab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace splab {

bool is_valid(const GridField& g) {
    if (g.count() < 8 || !(g.domain_length > 0.0)) return false;
    for (double v : g.values)
        if (!std::isfinite(v)) return false;
    return true;
}

double min_value(const GridField& g) {
    return *std::min_element(g.values.begin(), g.values.end());
}

double max_value(const GridField& g) {
    return *std::max_element(g.values.begin(), g.values.end());
}

double mass(const GridField& g) {
    double s = 0.0;
    for (double v : g.values) s += v;
    return g.h() * s;
}

double mean(const GridField& g) { return mass(g) / g.domain_length; }

double norm_l1(const GridField& g) {
    double s = 0.0;
    for (double v : g.values) s += std::abs(v);
    return g.h() * s;
}

double norm_l2_sq(const GridField& g) {
    double s = 0.0;
    for (double v : g.values) s += v * v;
    return g.h() * s;
}

double norm_inf(const GridField& g) {
    double s = 0.0;
    for (double v : g.values) s = std::max(s, std::abs(v));
    return s;
}

std::vector<double> cumsum_midpoint(const GridField& g) {
    const std::size_t n = g.count();
    const double h = g.h();
    std::vector<double> faces(n + 1);
    faces[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += g.values[i];
        faces[i + 1] = h * acc;
    }
    return faces;
}

std::vector<double> cumsum_at_centers(const GridField& g) {
    const auto faces = cumsum_midpoint(g);
    std::vector<double> centers(g.count());
    for (std::size_t i = 0; i < g.count(); ++i)
        centers[i] = 0.5 * (faces[i] + faces[i + 1]);
    return centers;
}

std::vector<double> cell_derivative(const GridField& g) {
    const std::size_t n = g.count();
    const double h = g.h();
    std::vector<double> d(n);
    if (n < 2) return d;
    d[0] = (g.values[1] - g.values[0]) / h;
    d[n - 1] = (g.values[n - 1] - g.values[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (g.values[i + 1] - g.values[i - 1]) / (2.0 * h);
    return d;
}

double grad_norm_sq(const GridField& g) {
    const auto d = cell_derivative(g);
    double s = 0.0;
    for (double v : d) s += v * v;
    return g.h() * s;
}

}  // namespace splab
