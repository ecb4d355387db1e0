#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "splab/numerics.hpp"

namespace splab {

enum class Family { power, log_family, inverse_r, custom };

/// A diffusion coefficient family a(r) > 0 together with the majorant scale C.
/// power:     a(r) = (1+r)^(-p)
/// log:       a(r) = 1 / ((1+r) * log(1+r)^alpha)
/// inverse_r: a(r) = 1/r
struct DiffusionSpec {
    Family family = Family::power;
    double p = 2.0;
    double alpha = 1.0;
    double C = 1.0;

    std::function<double(double)> custom_a;
    std::function<double(double)> custom_A;  // optional closed tail integral
    std::function<double(double)> custom_B;  // optional concave majorant
    bool custom_integrable_at_inf = false;
    bool custom_integrable_at_zero = false;

    static DiffusionSpec power(double p, double C = 1.0);
    static DiffusionSpec log_alpha(double alpha, double C = 1.0);
    static DiffusionSpec inverse();

    std::string name() const;
};

/// Everything derived from a diffusion family: the tail integral A, the
/// transformed flux function psi (normalized psi(1) = 0), its companion psi1
/// (psi1' = r psi'), the inverse of psi on its range, and the concave
/// majorant B with beta = B/r.
///
/// Immutable after construction; the spline caches used when no closed form
/// exists are internally synchronized, so instances may be shared across
/// concurrently running simulations.
class DiffusionLaw {
public:
    explicit DiffusionLaw(DiffusionSpec spec);

    const DiffusionSpec& spec() const { return spec_; }
    bool integrable_at_infinity() const { return integrable_inf_; }
    bool integrable_at_zero() const { return integrable_zero_; }

    /// a(r); throws NonPositiveArgument for r <= 0.
    double a(double r) const;

    /// A(r) = -int_r^inf a(s) ds; throws NotIntegrableAtInfinity when the
    /// family has no integrable tail.
    double A(double r) const;

    double psi(double r) const;
    double psi_prime(double r) const;  // a(1/r) / r^2
    double psi1(double r) const;
    double psi1_prime(double r) const;  // a(1/r) / r

    /// Endpoints of range(psi): psi(0+) (= A(1) when the tail is integrable,
    /// else -inf) and psi(inf) (= int_0^1 a when integrable at zero, else +inf).
    double psi_lower() const { return psi_lo_; }
    double psi_upper() const { return psi_hi_; }

    /// Inverse of psi; throws OutOfRange outside (psi_lower, psi_upper).
    double psi_inverse(double z) const;

    bool has_majorant() const;
    double majorant(double r) const;  // B(r); throws NoDefaultMajorant
    double beta(double r) const;      // B(r) / r

    /// Solver hot-loop variants: identical to psi/psi1 when a closed form
    /// exists, otherwise served from a lazily built monotone spline cache.
    double psi_fast(double r) const;
    double psi1_fast(double r) const;
    void prebuild_cache(double r_lo, double r_hi) const;

private:
    struct Cache {
        MonotoneCubic table;  // over log r
        double lo = 0.0, hi = 0.0;
    };

    double psi_closed(double r, bool* ok) const;
    double psi1_closed(double r, bool* ok) const;
    double psi_quad(double r) const;
    double psi1_quad(double r) const;
    double cached_eval(std::shared_ptr<const Cache>& slot, bool for_psi1, double r) const;

    DiffusionSpec spec_;
    bool integrable_inf_ = false;
    bool integrable_zero_ = false;
    double psi_lo_ = 0.0;
    double psi_hi_ = 0.0;

    mutable std::mutex cache_mutex_;
    mutable std::shared_ptr<const Cache> psi_cache_;
    mutable std::shared_ptr<const Cache> psi1_cache_;
};

/// Unchecked a(r) for solver hot loops; assumes r > 0.
inline double a_value(const DiffusionSpec& s, double r) {
    switch (s.family) {
        case Family::power: {
            const double b = 1.0 + r;
            if (s.p == 0.0) return 1.0;
            if (s.p == 1.0) return 1.0 / b;
            if (s.p == 2.0) return 1.0 / (b * b);
            if (s.p == 0.5) return 1.0 / std::sqrt(b);
            return std::pow(b, -s.p);
        }
        case Family::log_family: {
            const double L = std::log1p(r);
            if (s.alpha == 1.0) return 1.0 / ((1.0 + r) * L);
            if (s.alpha == 2.0) return 1.0 / ((1.0 + r) * L * L);
            return 1.0 / ((1.0 + r) * std::pow(L, s.alpha));
        }
        case Family::inverse_r:
            return 1.0 / r;
        case Family::custom:
            return s.custom_a(r);
    }
    return 0.0;
}

/// Unchecked psi'(r) = a(1/r)/r^2 for solver hot loops; assumes r > 0.
inline double psi_prime_value(const DiffusionSpec& s, double r) {
    switch (s.family) {
        case Family::power: {
            const double q = r / (1.0 + r);
            if (s.p == 0.0) return 1.0 / (r * r);
            if (s.p == 1.0) return q / (r * r);
            if (s.p == 2.0) return 1.0 / ((1.0 + r) * (1.0 + r));
            if (s.p == 0.5) return std::sqrt(q) / (r * r);
            return std::pow(q, s.p) / (r * r);
        }
        case Family::log_family: {
            const double L = std::log1p(1.0 / r);
            const double denom = r * (1.0 + r);
            if (s.alpha == 1.0) return 1.0 / (denom * L);
            if (s.alpha == 2.0) return 1.0 / (denom * L * L);
            return 1.0 / (denom * std::pow(L, s.alpha));
        }
        case Family::inverse_r:
            return 1.0 / r;
        case Family::custom:
            return s.custom_a(1.0 / r) / (r * r);
    }
    return 0.0;
}

struct Gex1Result {
    double kappa = 0.0;
    bool verified = false;
};

/// Certifies a(r) <= eps*r*a(r) + kappa/r on (0,1) at eps = 1/M by sampling
/// kappa = sup r*a(r)*(1 - eps*r) on a log grid; throws ConditionFails when
/// the sup keeps growing under grid refinement (left endpoint pushed down).
Gex1Result check_gex1(const DiffusionLaw& law, double M);

/// Checks 0 <= -r A(r) <= B(r), concavity of B, and decay of beta on a log
/// grid up to r = 1e8. Throws MajorantViolation (with the offending r) or
/// NoDefaultMajorant.
void verify_majorant(const DiffusionLaw& law);

}  // namespace splab
