#ifndef WICKSELL_VERIFY_HPP_
#define WICKSELL_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "wicksell/isotonize.hpp"
#include "wicksell/measures.hpp"
#include "wicksell/model.hpp"
#include "wicksell/quadrature.hpp"

namespace wicksell {

struct VerifyOptions {
  std::uint64_t seed = 20240501;
  double f0_tol = 1e-6;
  double arcsin_tol = 1e-8;
  double hull_tol = 1e-6;
  double pava_tol = 1e-6;
  double v0_tol = 1e-6;
  double marshall_slack = 1e-9;
  std::size_t grid_points = 50;        // inversion round trip
  std::size_t n_measures = 100;        // arcsin and hull checks
  std::size_t max_atoms = 200;
  std::size_t hull_grid = 100000;
  std::size_t switch_pairs = 1000;
  std::size_t v0_points = 5;
  // The constant in pi/2 - sum w asin(sqrt(min(1, x/z))). Exposed so a
  // fixture can perturb it and watch the arcsin check fail.
  double arcsin_constant = std::numbers::pi / 2.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest observed error (or violation count)
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

// Random measure with 1..max_atoms atoms in (0, 10] and Dirichlet weights.
DiscreteMeasure random_measure(RandomStream& rng, std::size_t max_atoms);

// int_x^inf V_G(s) / (2 sqrt s) ds by quadrature, split at the atoms above x
// with t^2 substitutions at each atom (and at s = 0 when x = 0).
double arcsin_tail_quadrature(const DiscreteMeasure& measure, double x,
                              double abs_tol);

// Least concave majorant of (xs, ys) by gift wrapping: from each vertex, the
// next vertex is the farthest point of maximal chord slope. Returns vertex
// indices. O(points * vertices).
std::vector<std::size_t> gift_wrap_hull(std::span<const double> xs,
                                        std::span<const double> ys);

// U0(x) = int_0^x V0 = (pi/2) E[min(X, x) / sqrt(X)].
double u0_oracle(const TrueModel& model, double x,
                 const QuadOptions& options = {});

CheckResult check_f0_roundtrip(const TrueModel& model,
                               const VerifyOptions& options);
CheckResult check_arcsin_identity(const VerifyOptions& options);
CheckResult check_hull_bruteforce(const VerifyOptions& options);
CheckResult check_pava_projection(const VerifyOptions& options);
CheckResult check_switch_relation(const VerifyOptions& options);
CheckResult check_marshall(const VerifyOptions& options);
CheckResult check_v0_reduction(const TrueModel& model,
                               const VerifyOptions& options);

// All of the above, for exp(1.2) and the Hoelder peak with gamma = 0.8.
VerifyReport run_verify(const VerifyOptions& options = {});

}  // namespace wicksell

#endif  // WICKSELL_VERIFY_HPP_
