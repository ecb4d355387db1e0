#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "splab/errors.hpp"
#include "splab/nonlinearity.hpp"

using namespace splab;

namespace {

// Reference for psi(r) = int_{1/r}^1 a(w) dw, integrated in log w so both the
// near-zero (r large) and far-tail (r small) endpoints stay smooth.
double psi_oracle(const std::function<double(double)>& a, double r) {
    return oracles::simpson([&](double s) { return a(std::exp(s)) * std::exp(s); },
                            std::log(1.0 / r), 0.0);
}

double psi1_oracle(const std::function<double(double)>& a, double r) {
    return oracles::simpson([&](double s) { return a(std::exp(s)); },
                            std::log(1.0 / r), 0.0);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return g;
}

const std::vector<DiffusionSpec> kBuiltins = {
    DiffusionSpec::inverse(),     DiffusionSpec::power(0.5), DiffusionSpec::power(1.0),
    DiffusionSpec::power(2.0),    DiffusionSpec::power(1.5), DiffusionSpec::log_alpha(1.0),
    DiffusionSpec::log_alpha(2.0)};

}  // namespace

TEST_CASE("a_eval family formulas") {
    const DiffusionLaw p1(DiffusionSpec::power(1.0));
    CHECK(p1.a(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    const DiffusionLaw inv(DiffusionSpec::inverse());
    CHECK(inv.a(2.0) == doctest::Approx(0.5).epsilon(1e-15));
    const DiffusionLaw l1(DiffusionSpec::log_alpha(1.0));
    CHECK(l1.a(std::exp(1.0) - 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(p1.a(0.0), NonPositiveArgument);
    CHECK_THROWS_AS(p1.a(-1.0), NonPositiveArgument);
}

TEST_CASE("A_eval closed forms against quadrature oracle") {
    const DiffusionLaw p2(DiffusionSpec::power(2.0));
    // oracle: int_1^R a (in log s, where the integrand is tame) + closed tail
    const auto a2 = [](double s) { return std::pow(1.0 + s, -2.0); };
    const double tail = 1.0 / (1.0 + 1e6);  // int_R^inf (1+s)^-2 = 1/(1+R)
    const double oracle =
        -(oracles::simpson([&](double t) { return a2(std::exp(t)) * std::exp(t); }, 0.0,
                           std::log(1e6)) +
          tail);
    CHECK(p2.A(1.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(p2.A(1.0) == doctest::Approx(oracle).epsilon(1e-4));

    const DiffusionLaw l2(DiffusionSpec::log_alpha(2.0));
    CHECK(l2.A(std::exp(1.0) - 1.0) == doctest::Approx(-1.0).epsilon(1e-12));

    const DiffusionLaw p1(DiffusionSpec::power(1.0));
    CHECK_THROWS_AS(p1.A(1.0), NotIntegrableAtInfinity);
    const DiffusionLaw inv(DiffusionSpec::inverse());
    CHECK_THROWS_AS(inv.A(2.0), NotIntegrableAtInfinity);
}

TEST_CASE("psi closed forms and normalization") {
    const DiffusionLaw inv(DiffusionSpec::inverse());
    CHECK(inv.psi(1.0) == 0.0);
    CHECK(inv.psi(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    const DiffusionLaw p2(DiffusionSpec::power(2.0));
    // oracle: quadrature of psi'(r) = a(1/r)/r^2 on (1,2)
    const double via_prime = oracles::simpson(
        [&](double r) { return std::pow(1.0 + 1.0 / r, -2.0) / (r * r); }, 1.0, 2.0);
    CHECK(p2.psi(2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(p2.psi(2.0) == doctest::Approx(via_prime).epsilon(1e-10));

    const DiffusionLaw inv2(DiffusionSpec::inverse());
    CHECK(inv2.psi1(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double psi1_quad = psi1_oracle([](double w) { return 1.0 / w; }, 2.0);
    CHECK(inv2.psi1(2.0) == doctest::Approx(psi1_quad).epsilon(1e-10));

    CHECK_THROWS_AS(p2.psi(0.0), NonPositiveArgument);
    CHECK_THROWS_AS(p2.psi1(-2.0), NonPositiveArgument);
}

TEST_CASE("psi_inverse: normalization, bisection oracle, range") {
    for (const auto& spec : kBuiltins) {
        const DiffusionLaw law(spec);
        CHECK(law.psi_inverse(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    const DiffusionLaw inv(DiffusionSpec::inverse());
    const double by_bisect =
        oracles::bisect([&](double r) { return inv.psi(r) - 1.0; }, 1.0, 10.0);
    CHECK(inv.psi_inverse(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(inv.psi_inverse(1.0) == doctest::Approx(by_bisect).epsilon(1e-10));

    const DiffusionLaw p2(DiffusionSpec::power(2.0));
    // range endpoints from the two tail integrals
    CHECK(p2.psi_lower() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(p2.psi_upper() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(p2.psi_inverse(0.6), OutOfRange);
    CHECK_THROWS_AS(p2.psi_inverse(-0.5), OutOfRange);
}

TEST_CASE("substitution identity, round trip, derivative consistency") {
    for (const auto& spec : kBuiltins) {
        const DiffusionLaw law(spec);
        const auto a_fn = [&](double w) { return law.a(w); };
        double prev_psi = -1e308;
        for (double r : log_grid(1e-4, 1e4, 100)) {
            const double p = law.psi(r);
            CHECK(p > prev_psi);  // strict monotonicity
            prev_psi = p;
            CHECK(std::abs(p - psi_oracle(a_fn, r)) <= 1e-8);
            const double back = law.psi_inverse(p);
            CHECK(std::abs(back - r) <= 1e-8 * std::max(1.0, r));
            const double h = 1e-5 * r;
            const double fd = (law.psi(r + h) - law.psi(r - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(law.psi_prime(r)).epsilon(1e-6));
        }
    }
}

TEST_CASE("tail identity with quadrature tail bound") {
    for (const auto& spec : {DiffusionSpec::power(2.0), DiffusionSpec::power(1.5),
                             DiffusionSpec::log_alpha(2.0)}) {
        const DiffusionLaw law(spec);
        const double r_small = 1e-10;
        const double estimate = law.psi(r_small) + law.A(1.0 / r_small);
        CHECK(std::abs(estimate - law.A(1.0)) <= 1e-8);
    }
}

TEST_CASE("psi1_prime equals r psi_prime") {
    for (const auto& spec : kBuiltins) {
        const DiffusionLaw law(spec);
        for (double r : log_grid(1e-3, 1e3, 25)) {
            CHECK(law.psi1_prime(r) == doctest::Approx(r * law.psi_prime(r)).epsilon(1e-13));
            const double h = 1e-5 * r;
            const double fd = (law.psi1(r + h) - law.psi1(r - h)) / (2.0 * h);
            CHECK(fd == doctest::Approx(law.psi1_prime(r)).epsilon(2e-5));
        }
    }
}

TEST_CASE("custom family agrees with the closed-form twin") {
    DiffusionSpec spec;
    spec.family = Family::custom;
    spec.custom_a = [](double r) { return std::pow(1.0 + r, -2.0); };
    spec.custom_integrable_at_inf = true;
    spec.custom_integrable_at_zero = true;
    const DiffusionLaw custom(spec);
    const DiffusionLaw closed(DiffusionSpec::power(2.0));
    for (double r : log_grid(1e-3, 1e3, 40)) {
        CHECK(custom.psi(r) == doctest::Approx(closed.psi(r)).epsilon(1e-9));
        CHECK(custom.psi1(r) == doctest::Approx(closed.psi1(r)).epsilon(1e-9));
        CHECK(custom.A(r) == doctest::Approx(closed.A(r)).epsilon(1e-9));
        // spline-cached path stays close to the accurate one
        CHECK(std::abs(custom.psi_fast(r) - closed.psi(r)) <= 1e-6 * (1.0 + std::abs(closed.psi(r))));
        CHECK(std::abs(custom.psi1_fast(r) - closed.psi1(r)) <=
              1e-6 * (1.0 + std::abs(closed.psi1(r))));
    }
    for (double z : {-0.4, -0.1, 0.0, 0.2, 0.45}) {
        CHECK(custom.psi_inverse(z) == doctest::Approx(closed.psi_inverse(z)).epsilon(1e-8));
    }
}

TEST_CASE("psi1_fast cache tracks quadrature for the log family") {
    const DiffusionLaw law(DiffusionSpec::log_alpha(1.0));
    law.prebuild_cache(1e-6, 1e3);
    for (double r : log_grid(1e-5, 1e2, 50)) {
        const double exact = law.psi1(r);
        CHECK(std::abs(law.psi1_fast(r) - exact) <= 1e-6 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("check_gex1 certifies the global families and rejects log(2)") {
    const DiffusionLaw inv(DiffusionSpec::inverse());
    const auto r1 = check_gex1(inv, 1.0);  // eps = 1
    CHECK(r1.verified);
    // dense-sampling oracle: sup of r*(1/r)*(1-r) = sup(1-r) = 1 on (0,1)
    CHECK(r1.kappa == doctest::Approx(1.0).epsilon(1e-6));

    const DiffusionLaw p1(DiffusionSpec::power(1.0));
    const auto r2 = check_gex1(p1, 1.0);
    CHECK(r2.verified);
    CHECK(r2.kappa <= 1.0);

    const DiffusionLaw p0(DiffusionSpec::power(0.0));
    const auto r3 = check_gex1(p0, 2.0);  // eps = 0.5
    CHECK(r3.verified);
    CHECK(std::isfinite(r3.kappa));

    const DiffusionLaw l2(DiffusionSpec::log_alpha(2.0));
    CHECK_THROWS_AS(check_gex1(l2, 1.0), ConditionFails);
}

TEST_CASE("majorant: equality case, decay, and absence") {
    const DiffusionLaw p2(DiffusionSpec::power(2.0));
    REQUIRE(p2.has_majorant());
    for (double r : log_grid(1e-3, 1e3, 30)) {
        CHECK(p2.majorant(r) == doctest::Approx(r / (1.0 + r)).epsilon(1e-14));
        CHECK(p2.beta(r) == doctest::Approx(1.0 / (1.0 + r)).epsilon(1e-14));
        // -r A(r) = B(r) exactly for this family at C=1; A via quadrature oracle
        const double Aq =
            -(oracles::simpson([](double t) { return std::exp(t) * std::pow(1.0 + std::exp(t), -2.0); },
                               std::log(r), std::log(1e5)) +
              1.0 / (1.0 + 1e5));
        CHECK(-r * Aq == doctest::Approx(p2.majorant(r)).epsilon(1e-4));
    }
    CHECK(p2.beta(1e6) < 1e-5);
    CHECK_NOTHROW(verify_majorant(p2));
    CHECK_NOTHROW(verify_majorant(DiffusionLaw(DiffusionSpec::power(1.5))));
    CHECK_NOTHROW(verify_majorant(DiffusionLaw(DiffusionSpec::log_alpha(2.0))));
    CHECK_NOTHROW(verify_majorant(DiffusionLaw(DiffusionSpec::log_alpha(1.5))));

    const DiffusionLaw p1(DiffusionSpec::power(1.0));
    CHECK(!p1.has_majorant());
    CHECK_THROWS_AS(p1.majorant(1.0), NoDefaultMajorant);
    CHECK_THROWS_AS(verify_majorant(p1), NoDefaultMajorant);

    // a user-supplied majorant that undercuts -rA must be rejected
    DiffusionSpec bad;
    bad.family = Family::custom;
    bad.custom_a = [](double r) { return std::pow(1.0 + r, -2.0); };
    bad.custom_integrable_at_inf = true;
    bad.custom_integrable_at_zero = true;
    bad.custom_B = [](double r) { return 0.5 * r / (1.0 + r); };
    CHECK_THROWS_AS(verify_majorant(DiffusionLaw(bad)), MajorantViolation);
}
