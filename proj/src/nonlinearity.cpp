#include "splab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "splab/errors.hpp"

namespace splab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

void require_positive(double r, const char* what) {
    if (!(r > 0.0)) throw NonPositiveArgument(std::string(what) + ": argument must be positive");
}
}  // namespace

DiffusionSpec DiffusionSpec::power(double p, double C) {
    DiffusionSpec s;
    s.family = Family::power;
    s.p = p;
    s.C = C;
    return s;
}

DiffusionSpec DiffusionSpec::log_alpha(double alpha, double C) {
    DiffusionSpec s;
    s.family = Family::log_family;
    s.alpha = alpha;
    s.C = C;
    return s;
}

DiffusionSpec DiffusionSpec::inverse() {
    DiffusionSpec s;
    s.family = Family::inverse_r;
    return s;
}

std::string DiffusionSpec::name() const {
    switch (family) {
        case Family::power: return "power(p=" + std::to_string(p) + ")";
        case Family::log_family: return "log(alpha=" + std::to_string(alpha) + ")";
        case Family::inverse_r: return "inverse";
        case Family::custom: return "custom";
    }
    return "?";
}

DiffusionLaw::DiffusionLaw(DiffusionSpec spec) : spec_(std::move(spec)) {
    switch (spec_.family) {
        case Family::power:
            integrable_inf_ = spec_.p > 1.0;
            integrable_zero_ = true;
            break;
        case Family::log_family:
            integrable_inf_ = spec_.alpha > 1.0;
            integrable_zero_ = spec_.alpha < 1.0;
            break;
        case Family::inverse_r:
            integrable_inf_ = false;
            integrable_zero_ = false;
            break;
        case Family::custom:
            if (!spec_.custom_a) throw Error("custom family requires a()");
            integrable_inf_ = spec_.custom_integrable_at_inf;
            integrable_zero_ = spec_.custom_integrable_at_zero;
            break;
    }
    psi_lo_ = integrable_inf_ ? A(1.0) : -kInf;
    if (!integrable_zero_) {
        psi_hi_ = kInf;
    } else {
        switch (spec_.family) {
            case Family::power:
                psi_hi_ = near(spec_.p, 1.0)
                              ? std::log(2.0)
                              : (std::pow(2.0, 1.0 - spec_.p) - 1.0) / (1.0 - spec_.p);
                break;
            case Family::log_family:
                psi_hi_ = std::pow(std::log(2.0), 1.0 - spec_.alpha) / (1.0 - spec_.alpha);
                break;
            default:
                psi_hi_ = integrate([this](double w) { return a(w); }, 0.0, 1.0, 1e-12);
                break;
        }
    }
}

double DiffusionLaw::a(double r) const {
    require_positive(r, "a");
    return a_value(spec_, r);
}

double DiffusionLaw::A(double r) const {
    require_positive(r, "A");
    if (!integrable_inf_)
        throw NotIntegrableAtInfinity("A undefined: a is not integrable on (1,inf) for " +
                                      spec_.name());
    switch (spec_.family) {
        case Family::power:
            return -std::pow(1.0 + r, 1.0 - spec_.p) / (spec_.p - 1.0);
        case Family::log_family:
            return -std::pow(std::log1p(r), 1.0 - spec_.alpha) / (spec_.alpha - 1.0);
        case Family::inverse_r:
            break;  // unreachable, flag is false
        case Family::custom:
            if (spec_.custom_A) return spec_.custom_A(r);
            // tail via w = 1/s: int_r^inf a(s) ds = int_0^{1/r} a(1/w)/w^2 dw
            return -integrate([this](double w) { return spec_.custom_a(1.0 / w) / (w * w); },
                              0.0, 1.0 / r, 1e-10);
    }
    return 0.0;
}

double DiffusionLaw::psi_prime(double r) const {
    require_positive(r, "psi_prime");
    return psi_prime_value(spec_, r);
}

double DiffusionLaw::psi1_prime(double r) const {
    require_positive(r, "psi1_prime");
    return r * psi_prime(r);
}

double DiffusionLaw::psi_closed(double r, bool* ok) const {
    *ok = true;
    switch (spec_.family) {
        case Family::power: {
            const double p = spec_.p;
            if (near(p, 1.0)) return std::log(2.0 * r / (1.0 + r));
            return (std::pow(2.0, 1.0 - p) - std::pow(1.0 + 1.0 / r, 1.0 - p)) / (1.0 - p);
        }
        case Family::log_family: {
            const double al = spec_.alpha;
            const double L = std::log1p(1.0 / r);
            if (near(al, 1.0)) return std::log(std::log(2.0)) - std::log(L);
            return (std::pow(std::log(2.0), 1.0 - al) - std::pow(L, 1.0 - al)) / (1.0 - al);
        }
        case Family::inverse_r:
            return std::log(r);
        case Family::custom:
            break;
    }
    *ok = false;
    return 0.0;
}

double DiffusionLaw::psi1_closed(double r, bool* ok) const {
    *ok = true;
    switch (spec_.family) {
        case Family::power: {
            const double p = spec_.p;
            if (near(p, 0.0)) return std::log(r);
            if (near(p, 1.0)) return std::log(0.5 * (1.0 + r));
            if (near(p, 2.0)) return std::log(0.5 * (1.0 + r)) + 1.0 / (1.0 + r) - 0.5;
            break;
        }
        case Family::inverse_r:
            return r - 1.0;
        default:
            break;
    }
    *ok = false;
    return 0.0;
}

double DiffusionLaw::psi_quad(double r) const {
    return integrate([this](double w) { return a(w); }, 1.0 / r, 1.0, 1e-10);
}

double DiffusionLaw::psi1_quad(double r) const {
    return integrate([this](double w) { return a(w) / w; }, 1.0 / r, 1.0, 1e-10);
}

double DiffusionLaw::psi(double r) const {
    require_positive(r, "psi");
    bool ok = false;
    const double v = psi_closed(r, &ok);
    return ok ? v : psi_quad(r);
}

double DiffusionLaw::psi1(double r) const {
    require_positive(r, "psi1");
    bool ok = false;
    const double v = psi1_closed(r, &ok);
    return ok ? v : psi1_quad(r);
}

double DiffusionLaw::psi_inverse(double z) const {
    if (!(z > psi_lo_ && z < psi_hi_))
        throw OutOfRange("psi_inverse: z outside range of psi for " + spec_.name());
    switch (spec_.family) {
        case Family::power: {
            const double p = spec_.p;
            if (near(p, 1.0)) {
                const double e = std::exp(z);  // z < log 2
                return e / (2.0 - e);
            }
            const double t = std::pow(2.0, 1.0 - p) - (1.0 - p) * z;
            return 1.0 / (std::pow(t, 1.0 / (1.0 - p)) - 1.0);
        }
        case Family::log_family: {
            const double al = spec_.alpha;
            if (near(al, 1.0)) {
                // psi = log(log 2 / log(1 + 1/r))
                const double L = std::log(2.0) * std::exp(-z);
                return 1.0 / std::expm1(L);
            }
            const double s = std::pow(std::log(2.0), 1.0 - al) - (1.0 - al) * z;
            return 1.0 / std::expm1(std::pow(s, 1.0 / (1.0 - al)));
        }
        case Family::inverse_r:
            return std::exp(z);
        case Family::custom:
            break;
    }
    // Numeric route: bracket on a log scale, bisect, then Newton polish.
    double lo = 1.0, hi = 1.0;
    if (z >= 0.0) {
        while (psi(hi) < z) {
            hi *= 4.0;
            if (hi > 1e300) throw OutOfRange("psi_inverse: bracket expansion failed");
        }
    } else {
        while (psi(lo) > z) {
            lo /= 4.0;
            if (lo < 1e-300) throw OutOfRange("psi_inverse: bracket expansion failed");
        }
    }
    if (z >= 0.0) lo = std::max(lo, hi / 4.0); else hi = std::min(hi, lo * 4.0);
    double r = find_root_bracketed([this, z](double x) { return psi(x) - z; }, lo, hi,
                                   1e-12 * std::max(1.0, std::abs(z)));
    for (int i = 0; i < 3; ++i) {
        const double f = psi(r) - z;
        const double d = psi_prime(r);
        if (d <= 0.0) break;
        const double step = f / d;
        if (!(r - step > 0.0)) break;
        r -= step;
    }
    return r;
}

bool DiffusionLaw::has_majorant() const {
    switch (spec_.family) {
        case Family::power: return spec_.p > 1.0 && spec_.p <= 2.0;
        case Family::log_family: return spec_.alpha > 1.0 && spec_.alpha <= 2.0;
        case Family::inverse_r: return false;
        case Family::custom: return static_cast<bool>(spec_.custom_B);
    }
    return false;
}

double DiffusionLaw::majorant(double r) const {
    require_positive(r, "majorant");
    if (!has_majorant())
        throw NoDefaultMajorant("no concave majorant available for " + spec_.name());
    switch (spec_.family) {
        case Family::power:
            return spec_.C * r * std::pow(1.0 + r, 1.0 - spec_.p) / (spec_.p - 1.0);
        case Family::log_family:
            return spec_.C * r * std::pow(std::log1p(r), 1.0 - spec_.alpha) / (spec_.alpha - 1.0);
        default:
            return spec_.custom_B(r);
    }
}

double DiffusionLaw::beta(double r) const {
    require_positive(r, "beta");
    if (!has_majorant())
        throw NoDefaultMajorant("no concave majorant available for " + spec_.name());
    switch (spec_.family) {
        case Family::power:
            return spec_.C * std::pow(1.0 + r, 1.0 - spec_.p) / (spec_.p - 1.0);
        case Family::log_family:
            return spec_.C * std::pow(std::log1p(r), 1.0 - spec_.alpha) / (spec_.alpha - 1.0);
        default:
            return spec_.custom_B(r) / r;
    }
}

double DiffusionLaw::cached_eval(std::shared_ptr<const Cache>& slot, bool for_psi1,
                                 double r) const {
    std::shared_ptr<const Cache> local;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        local = slot;
        if (!local || r < local->lo || r > local->hi) {
            double lo = r / 16.0, hi = r * 16.0;
            if (local) {
                lo = std::min(lo, local->lo);
                hi = std::max(hi, local->hi);
            } else {
                lo = std::min(lo, 1e-9);
                hi = std::max(hi, 1e3);
            }
            const double lg_lo = std::log(lo), lg_hi = std::log(hi);
            const int per_decade = 96;
            const int n = std::clamp(
                static_cast<int>((lg_hi - lg_lo) / std::log(10.0) * per_decade) + 2, 64, 16384);
            std::vector<double> xs(n), ys(n);
            for (int i = 0; i < n; ++i) {
                const double lg = lg_lo + (lg_hi - lg_lo) * i / (n - 1);
                xs[i] = lg;
                const double rr = std::exp(lg);
                ys[i] = for_psi1 ? psi1_quad(rr) : psi_quad(rr);
            }
            auto fresh = std::make_shared<Cache>();
            fresh->table = MonotoneCubic(std::move(xs), std::move(ys));
            fresh->lo = lo;
            fresh->hi = hi;
            slot = fresh;
            local = fresh;
        }
    }
    return local->table(std::log(r));
}

double DiffusionLaw::psi_fast(double r) const {
    require_positive(r, "psi_fast");
    bool ok = false;
    const double v = psi_closed(r, &ok);
    if (ok) return v;
    return cached_eval(psi_cache_, false, r);
}

double DiffusionLaw::psi1_fast(double r) const {
    require_positive(r, "psi1_fast");
    bool ok = false;
    const double v = psi1_closed(r, &ok);
    if (ok) return v;
    return cached_eval(psi1_cache_, true, r);
}

void DiffusionLaw::prebuild_cache(double r_lo, double r_hi) const {
    bool ok = false;
    psi_closed(1.0, &ok);
    if (!ok) {
        cached_eval(psi_cache_, false, r_lo);
        cached_eval(psi_cache_, false, r_hi);
    }
    psi1_closed(1.0, &ok);
    if (!ok) {
        cached_eval(psi1_cache_, true, r_lo);
        cached_eval(psi1_cache_, true, r_hi);
    }
}

Gex1Result check_gex1(const DiffusionLaw& law, double M) {
    if (!(M > 0.0)) throw NonPositiveArgument("check_gex1: M must be positive");
    const double eps = 1.0 / M;
    const auto sup_on = [&](double r_min, int n) {
        const double lg_lo = std::log(r_min), lg_hi = std::log(1.0);
        double sup = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = std::exp(lg_lo + (lg_hi - lg_lo) * (i + 0.5) / n);
            sup = std::max(sup, r * law.a(r) * (1.0 - eps * r));
        }
        return sup;
    };
    const double kappa = sup_on(1e-8, 2048);
    // Refinement both densifies and pushes the left endpoint down; a sup
    // pinned at the fixed endpoint would otherwise look spuriously stable.
    const double kappa_fine = sup_on(1e-16, 4096);
    if (kappa_fine > 1.1 * kappa + 1e-300)
        throw ConditionFails("gex1 sup diverges under grid refinement for " + law.spec().name() +
                             " (coarse " + std::to_string(kappa) + ", fine " +
                             std::to_string(kappa_fine) + ")");
    return Gex1Result{kappa, true};
}

void verify_majorant(const DiffusionLaw& law) {
    if (!law.has_majorant())
        throw NoDefaultMajorant("no concave majorant available for " + law.spec().name());
    const double lg_lo = std::log(1e-6), lg_hi = std::log(1e8);
    const int n = 400;
    std::vector<double> rs(n), Bs(n);
    for (int i = 0; i < n; ++i) {
        rs[i] = std::exp(lg_lo + (lg_hi - lg_lo) * i / (n - 1));
        Bs[i] = law.majorant(rs[i]);
    }
    for (int i = 0; i < n; ++i) {
        const double lhs = -rs[i] * law.A(rs[i]);
        const double tol = 1e-9 * (1.0 + std::abs(Bs[i]));
        if (lhs < -tol || lhs > Bs[i] + tol)
            throw MajorantViolation("bound 0 <= -rA(r) <= B(r) fails at r = " +
                                    std::to_string(rs[i]));
    }
    for (int i = 0; i + 2 < n; ++i) {
        const double s1 = (Bs[i + 1] - Bs[i]) / (rs[i + 1] - rs[i]);
        const double s2 = (Bs[i + 2] - Bs[i + 1]) / (rs[i + 2] - rs[i + 1]);
        if (s2 > s1 + 1e-9 * (1.0 + std::abs(s1)))
            throw MajorantViolation("B is not concave near r = " + std::to_string(rs[i + 1]));
    }
    // beta must decay monotonically over the last decade of the grid.
    double prev = law.beta(1e7);
    for (int i = 1; i <= 32; ++i) {
        const double r = 1e7 * std::pow(10.0, i / 32.0);
        const double b = law.beta(r);
        if (b > prev * (1.0 + 1e-12))
            throw MajorantViolation("beta fails to decay near r = " + std::to_string(r));
        prev = b;
    }
}

}  // namespace splab
