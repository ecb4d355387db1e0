#include "splab/numerics.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <cmath>
#include <limits>

#include "splab/errors.hpp"

namespace splab {

std::vector<double> tridiag_solve(std::span<const double> lower,
                                  std::span<const double> diag,
                                  std::span<const double> upper,
                                  std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw SingularSystem("tridiag_solve: inconsistent sizes");

    std::vector<double> c(n - 1), d(n), x(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(diag[i]));
    for (double v : lower) scale = std::max(scale, std::abs(v));
    for (double v : upper) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-300 + 1e-15 * scale;

    double piv = diag[0];
    if (std::abs(piv) <= tiny) throw SingularSystem("tridiag_solve: zero pivot at row 0");
    if (n > 1) c[0] = upper[0] / piv;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i - 1] * c[i - 1];
        if (std::abs(piv) <= tiny)
            throw SingularSystem("tridiag_solve: zero pivot at row " + std::to_string(i));
        if (i < n - 1) c[i] = upper[i] / piv;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / piv;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return x;
}

double find_root_bracketed(const std::function<double(double)>& phi,
                           double lo, double hi, double tol) {
    double flo = phi(lo);
    double fhi = phi(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw NoSignChange("find_root_bracketed: no sign change on bracket");

    double x = lo, fx = flo;
    for (int it = 0; it < 200; ++it) {
        // Secant candidate; fall back to bisection when it leaves the bracket.
        double mid = 0.5 * (lo + hi);
        double cand = mid;
        const double denom = fhi - flo;
        if (denom != 0.0) {
            double sec = hi - fhi * (hi - lo) / denom;
            if (sec > lo && sec < hi) cand = sec;
        }
        x = cand;
        fx = phi(x);
        if (std::abs(fx) <= tol) return x;
        if (fx == 0.0) return x;
        if (flo * fx < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
        if (hi - lo <= tol * std::max(1.0, std::abs(x))) break;
        // Force an occasional bisection so stalled secant steps cannot spin.
        if (it % 2 == 1) {
            double m = 0.5 * (lo + hi);
            double fm = phi(m);
            if (fm == 0.0) return m;
            if (flo * fm < 0.0) {
                hi = m;
                fhi = fm;
            } else {
                lo = m;
                flo = fm;
            }
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (QUADPACK values).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b, integral, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fc = f(c);
    double kron = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hw * kKronrodNodes[i];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kron *= hw;
    gauss *= hw;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    // Globally adaptive: refine the worst panel until the summed error
    // estimate meets the relative tolerance. Seeding with several panels on a
    // graded partition makes the initial scale estimate reliable even for
    // integrands concentrated near one endpoint of a huge interval.
    std::priority_queue<Panel> heap;
    double total_i = 0.0, total_e = 0.0;
    const int seed_panels = 8;
    double left = a;
    for (int k = 0; k < seed_panels; ++k) {
        // geometric grading toward 'a'
        const double frac = std::pow(2.0, k + 1 - seed_panels);
        const double right = (k + 1 == seed_panels) ? b : a + (b - a) * frac;
        if (right <= left) continue;
        const Panel p = gk15(f, left, right);
        total_i += p.integral;
        total_e += p.error;
        heap.push(p);
        left = right;
    }
    const int max_panels = 4000;
    int panels = seed_panels;
    while (total_e > rel_tol * std::max(std::abs(total_i), 1e-300) && panels < max_panels) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // panel collapsed to roundoff width; its error cannot improve
            total_e -= worst.error;
            continue;
        }
        const Panel l = gk15(f, worst.a, mid);
        const Panel r = gk15(f, mid, worst.b);
        total_i += l.integral + r.integral - worst.integral;
        total_e += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    return sign * total_i;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    slope_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            slope_[i] = 0.0;
        } else {
            // Harmonic mean keeps the interpolant monotone on each interval.
            const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
            const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
            slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // Fritsch-Carlson endpoint limiting.
    for (std::size_t i : {std::size_t{0}, n - 1}) {
        const double d = (i == 0) ? delta[0] : delta[n - 2];
        if (slope_[i] * d <= 0.0)
            slope_[i] = 0.0;
        else if (std::abs(slope_[i]) > 3.0 * std::abs(d))
            slope_[i] = 3.0 * d;
    }
}

double MonotoneCubic::operator()(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double hx = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / hx;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * hx * slope_[i] + h01 * y_[i + 1] + h11 * hx * slope_[i + 1];
}

}  // namespace splab
