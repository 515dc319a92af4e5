#ifndef WICKSELL_MEASURES_HPP_
#define WICKSELL_MEASURES_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wicksell/rng.hpp"

namespace wicksell {

// Finite probability measure on [0, inf). Atoms are strictly increasing,
// weights are positive and sum to one (within 1e-12). Immutable once built.
class DiscreteMeasure {
 public:
  // Canonicalizes: sorts by atom, merges duplicate atoms by summing their
  // weights and drops zero-weight atoms. Weights are not rescaled; they must
  // already sum to one.
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

  // Same, after dividing the weights by their (positive) sum.
  static DiscreteMeasure normalized(std::vector<double> atoms,
                                    std::vector<double> weights);

  static DiscreteMeasure point_mass(double atom);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  double max_atom() const { return atoms_.back(); }

  friend bool operator==(const DiscreteMeasure&,
                         const DiscreteMeasure&) = default;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

DiscreteMeasure canonicalize(const DiscreteMeasure& measure);

// Continuous piecewise-linear cdf through (x_i, F_i). F starts at 0 and ends
// at 1; the density is piecewise constant and therefore bounded.
class TabulatedCdf {
 public:
  TabulatedCdf(std::vector<double> x, std::vector<double> cdf);

  double cdf(double x) const;
  double density(double x) const;
  // Smallest x with cdf(x) >= p.
  double quantile(double p) const;
  double max_density() const;
  double lower() const { return x_.front(); }
  double upper() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return f_; }

 private:
  std::vector<double> x_;
  std::vector<double> f_;
};

struct ExponentialBase {
  double rate;
};

struct UniformBase {
  double upper;
};

struct TabulatedBase {
  TabulatedCdf cdf;
};

// The DP base measure alpha = total_mass * P, with P one of the families
// below. All built-in families have bounded densities and satisfy the Abel
// integrability condition int_x^inf (s - x)^{-1/2} d alpha(s) < inf.
class BaseMeasureSpec {
 public:
  using Family = std::variant<ExponentialBase, UniformBase, TabulatedBase>;

  BaseMeasureSpec(double total_mass, Family family);

  // alpha = 1 * Exponential(rate = 1 / mean(data)).
  static BaseMeasureSpec default_for(std::span<const double> data);
  // "[mass*]default", "[mass*]exp:rate" or "[mass*]uniform:upper"; mass
  // defaults to 1 and "default" means the data-scaled exponential above.
  static BaseMeasureSpec parse(const std::string& spec,
                               std::span<const double> data);

  double total_mass() const { return total_mass_; }
  const Family& family() const { return family_; }
  double sample(RandomStream& rng) const;
  double density_bound() const;
  std::string describe() const;

 private:
  double total_mass_;
  Family family_;
};

// Posterior DP(alpha + n G_n) given observations Z_1..Z_n.
class DPPosterior {
 public:
  DPPosterior(BaseMeasureSpec prior, std::vector<double> data);

  const BaseMeasureSpec& prior() const { return prior_; }
  std::span<const double> data() const { return data_; }
  std::size_t n() const { return data_.size(); }

 private:
  BaseMeasureSpec prior_;
  std::vector<double> data_;
};

inline constexpr double kDefaultTruncationTol = 1e-4;

DiscreteMeasure empirical_measure(std::span<const double> data);

// DP(n G_n) draw: data atoms reweighted by normalized i.i.d. Exp(1) variables.
DiscreteMeasure draw_bayesian_bootstrap(std::span<const double> data,
                                        RandomStream& rng);

struct StickBreakingDraw {
  DiscreteMeasure measure;
  std::size_t sticks;  // excludes the residual atom
};

// DP(alpha) draw by stick breaking, stopped once the unbroken stick is shorter
// than truncation_tol; the remainder goes to one extra base-measure atom.
StickBreakingDraw draw_stick_breaking(const BaseMeasureSpec& prior,
                                      RandomStream& rng,
                                      double truncation_tol);

struct DPDraw {
  DiscreteMeasure measure;
  double mixing_weight;  // V ~ Beta(|alpha|, n), the mass of the prior part
  std::size_t sticks;
};

// G = V Q + (1 - V) B_n with V ~ Beta(|alpha|, n), Q ~ DP(alpha) and B_n the
// Bayesian bootstrap, all independent.
DPDraw draw_dp_posterior_parts(const DPPosterior& posterior, RandomStream& rng,
                               double truncation_tol = kDefaultTruncationTol);

DiscreteMeasure draw_dp_posterior(const DPPosterior& posterior,
                                  RandomStream& rng,
                                  double truncation_tol = kDefaultTruncationTol);

double integrate(const DiscreteMeasure& measure,
                 const std::function<double(double)>& f);

}  // namespace wicksell

#endif  // WICKSELL_MEASURES_HPP_
