#pragma once

#include <functional>
#include <span>
#include <vector>

namespace splab {

/// Solves a tridiagonal system with the Thomas algorithm.
/// lower/upper have size n-1, diag and rhs size n. Intended for diagonally
/// dominant systems; throws SingularSystem when a pivot collapses.
std::vector<double> tridiag_solve(std::span<const double> lower,
                                  std::span<const double> diag,
                                  std::span<const double> upper,
                                  std::span<const double> rhs);

/// Bracketed scalar root: bisection with secant acceleration.
/// Requires phi(lo) * phi(hi) <= 0 (throws NoSignChange otherwise). Stops when
/// |phi(x)| <= tol or the bracket width drops below tol * max(1, |x|).
double find_root_bracketed(const std::function<double(double)>& phi,
                           double lo, double hi, double tol);

/// Adaptive Gauss-Kronrod (7-15) quadrature of f over [a, b] to the given
/// relative tolerance. Endpoints are never evaluated.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

/// Monotonicity-preserving cubic Hermite interpolant (Fritsch-Carlson limited
/// slopes) over a fixed abscissa set. Evaluation outside the abscissa span is
/// a contract violation; callers widen and rebuild instead.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    std::vector<double> x_, y_, slope_;
};

}  // namespace splab
