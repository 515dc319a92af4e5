#ifndef WICKSELL_QUADRATURE_HPP_
#define WICKSELL_QUADRATURE_HPP_

#include <cstddef>
#include <functional>
#include <span>

namespace wicksell {

inline constexpr double kDefaultQuadTol = 1e-9;

struct QuadOptions {
  double abs_tol = kDefaultQuadTol;
  std::size_t max_intervals = 4000;
};

struct QuadResult {
  double value;
  double error;  // Kronrod error estimate, summed over subintervals
  std::size_t evaluations;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b] with
// an absolute error target. b may be +infinity (mapped through
// x = a + t / (1 - t)). Interior points where f is not smooth may be passed
// as breakpoints; the initial partition starts at them. Throws
// QuadratureFailure when the target is not met.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& options = {},
                              std::span<const double> breakpoints = {});

// Integral over [a, b] of f where f has an inverse square-root type
// singularity at the left end (sqrt_at_left) and/or the right end. Uses
// x = a + t^2 (resp. x = b - t^2) on the corresponding half of the interval.
QuadResult integrate_sqrt_endpoints(const std::function<double(double)>& f,
                                    double a, double b, bool sqrt_at_left,
                                    bool sqrt_at_right,
                                    const QuadOptions& options = {});

}  // namespace wicksell

#endif  // WICKSELL_QUADRATURE_HPP_
