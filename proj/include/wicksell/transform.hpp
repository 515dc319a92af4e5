#ifndef WICKSELL_TRANSFORM_HPP_
#define WICKSELL_TRANSFORM_HPP_

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "wicksell/measures.hpp"
#include "wicksell/model.hpp"
#include "wicksell/quadrature.hpp"

namespace wicksell {

// Sorted, finite, nonnegative evaluation sites.
class QueryGrid {
 public:
  explicit QueryGrid(std::vector<double> points);
  // "start:stop:steps" -> steps + 1 equally spaced points.
  static QueryGrid parse(const std::string& spec);

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<double> points_;
};

// ---------------------------------------------------------------------------
// Functionals of a discrete measure G.

// V_G(x) = sum_{z_i > x} w_i (z_i - x)^{-1/2}. Throws SingularityError when x
// is an atom.
double v_of(const DiscreteMeasure& measure, double x);

// U_G(x) = int_0^x V_G = 2 sum w_i sqrt(z_i) - 2 sum_{z_i > x} w_i
// sqrt(z_i - x). Continuous, nondecreasing, constant beyond the last atom.
double u_of(const DiscreteMeasure& measure, double x);

// U_G evaluated at every atom of the measure, in atom order. O(m^2) but
// branch-free in the inner loop.
std::vector<double> u_at_atoms(const DiscreteMeasure& measure);

// int_x^inf V_G(s) / (2 sqrt s) ds = pi/2 - sum w_i asin(sqrt(min(1, x/z_i))).
double arcsin_tail(const DiscreteMeasure& measure, double x);

// F_G(x) = 1 - (2/pi) sqrt(x) V_G(x) - (2/pi) arcsin_tail(G, x). Not clamped.
double f_naive(const DiscreteMeasure& measure, double x);

// x itself, or the next representable double above it that is not an atom.
double jitter_off_atoms(const DiscreteMeasure& measure, double x);

// ---------------------------------------------------------------------------
// Ground-truth oracles for a model F0.

// g0(z) = int_z^inf dF0(x) / (2 sqrt(x^2 - x z)), the density of Z = Y X.
double forward_density(const TrueModel& model, double z,
                       const QuadOptions& options = {});

// Independent route for g0: tanh-sinh / exp-sinh quadrature directly in x,
// split at the model's singular points.
double forward_density_crosscheck(const TrueModel& model, double z,
                                  double abs_tol);

// G0(z) = P(Y X <= z) = F0(z) + int_{x > z} (1 - sqrt(1 - z/x)) dF0(x).
double observable_cdf(const TrueModel& model, double z,
                      const QuadOptions& options = {});

// V0(x) = (pi/2) int_x^inf s^{-1/2} dF0(s), the reduced form of
// int_x^inf g0(z) (z - x)^{-1/2} dz.
double v0_oracle(const TrueModel& model, double x,
                 const QuadOptions& options = {});

// V0(x) by the literal double integral int_x^inf g0(z) / sqrt(z - x) dz with
// g0 from forward_density. Slow; used to certify v0_oracle.
double v0_double_integral(const TrueModel& model, double x,
                          const QuadOptions& options = {});

// Closed form for the exponential family: (pi/2) sqrt(pi rate) erfc(sqrt(rate
// x)).
double v0_exponential(double rate, double x);

// Where a V function lives: nonzero only below support_end, smooth except at
// the listed points.
struct TailSpec {
  double support_end = std::numeric_limits<double>::infinity();
  std::vector<double> breakpoints;

  static TailSpec of(const TrueModel& model);
};

// F(x) = 1 - (2/pi) sqrt(x) V(x) - (2/pi) int_x^inf V(s) / (2 sqrt s) ds with
// the tail integral by quadrature.
double f0_from_v(const std::function<double(double)>& v_fn, double x,
                 const TailSpec& tail, const QuadOptions& options = {});

// F*(x) = 1 - V(x) / V(0), the size-unbiased distribution.
double fstar_from_v(const std::function<double(double)>& v_fn, double x);

}  // namespace wicksell

#endif  // WICKSELL_TRANSFORM_HPP_
