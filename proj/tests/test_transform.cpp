#include <doctest.h>

#include <cmath>
#include <random>

#include "splab/errors.hpp"
#include "splab/grid.hpp"
#include "splab/transform.hpp"

using namespace splab;

namespace {

GridField smooth_u(double M, double amp, std::size_t n) {
    GridField u;
    u.domain_length = 1.0;
    u.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        u.values[i] = M * (1.0 + amp * std::cos(M_PI * u.cell_center(i)));
    return u;
}

}  // namespace

TEST_CASE("u_to_f maps constants to constants") {
    for (double M : {0.5, 1.0, 2.0}) {
        const auto u = GridField::constant(32, 1.0, M);
        const auto f = u_to_f(u, 48);
        CHECK(f.domain_length == doctest::Approx(M).epsilon(1e-15));
        for (double v : f.values) CHECK(v == doctest::Approx(1.0 / M).epsilon(1e-14));
        CHECK(mass(f) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("u_to_f piecewise analytic inversion") {
    const double M = 2.0;
    const std::size_t n = 64;
    GridField u;
    u.domain_length = 1.0;
    u.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        u.values[i] = (u.cell_center(i) < 0.5) ? M / 2.0 : 3.0 * M / 2.0;
    const auto f = u_to_f(u, 64);  // M/4 lands on a cell boundary (64 % 4 == 0)
    for (std::size_t k = 0; k < f.count(); ++k) {
        const double y = f.cell_center(k);
        const double expected = (y < M / 4.0) ? 2.0 / M : 2.0 / (3.0 * M);
        CHECK(f.values[k] == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK(mass(f) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("u_to_f mass identity for random positive data") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.05, 10.0);
    for (int rep = 0; rep < 30; ++rep) {
        GridField u;
        u.domain_length = 1.0;
        u.values.resize(128);
        for (auto& v : u.values) v = dist(rng);
        const auto f = u_to_f(u, 256);
        CHECK(std::abs(mass(f) - 1.0) <= 1e-8);
    }
    GridField bad = GridField::constant(16, 1.0, 1.0);
    bad.values[3] = 0.0;
    CHECK_THROWS_AS(u_to_f(bad, 16), NonPositiveInput);
}

TEST_CASE("f_to_u inverts constants and reports defects") {
    const double M = 0.5;
    GridField f = GridField::constant(40, M, 1.0 / M);
    const auto r = f_to_u(f, 32);
    for (double v : r.u.values) CHECK(v == doctest::Approx(M).epsilon(1e-13));
    CHECK(std::abs(r.mean_defect) <= 1e-12);
    CHECK(std::abs(r.mass_defect) <= 1e-12);

    GridField off = GridField::constant(40, M, (1.0 + 1e-4) / M);
    CHECK_THROWS_AS(f_to_u(off, 32), MassDefect);
    GridField neg = f;
    neg.values[0] = -1.0;
    CHECK_THROWS_AS(f_to_u(neg, 32), NonPositiveInput);
}

TEST_CASE("round trip error halves under refinement") {
    double prev_err = 0.0;
    for (std::size_t n : {std::size_t{64}, std::size_t{128}, std::size_t{256}}) {
        const auto u0 = smooth_u(1.0, 0.3, n);
        const auto f = u_to_f(u0, n);
        const auto back = f_to_u(f, n);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            err = std::max(err, std::abs(back.u.values[i] - u0.values[i]));
        if (prev_err > 0.0) CHECK(prev_err / err >= 1.5);
        prev_err = err;
    }
    CHECK(prev_err < 0.05);
}

TEST_CASE("reciprocal identity f(y) u(F(y)) = 1 within interpolation error") {
    const std::size_t nu = 256, nf = 256;
    const auto u = smooth_u(1.0, 0.4, nu);
    const auto f = u_to_f(u, nf);
    const auto F = cumsum_at_centers(f);  // x-positions of the y cell centers
    double worst = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
        const double x = std::min(std::max(F[k], 0.0), 1.0 - 1e-15);
        const std::size_t i = static_cast<std::size_t>(x / u.h());
        worst = std::max(worst, std::abs(f.values[k] * u.values[i] - 1.0));
    }
    CHECK(worst <= 5.0 / static_cast<double>(std::min(nu, nf)));
}

TEST_CASE("ordering and duality between u and f") {
    // strictly increasing u maps to strictly decreasing f
    GridField u;
    u.domain_length = 1.0;
    u.values.resize(64);
    for (std::size_t i = 0; i < 64; ++i) u.values[i] = 0.5 + u.cell_center(i);
    const auto f = u_to_f(u, 64);
    for (std::size_t k = 1; k < f.count(); ++k) CHECK(f.values[k] <= f.values[k - 1] + 1e-14);

    const auto us = smooth_u(1.0, 0.4, 256);
    const auto fs = u_to_f(us, 256);
    const double dual = 1.0 / min_value(fs);
    CHECK(std::abs(dual - max_value(us)) <= 0.05 * max_value(us));
}
