#ifndef WICKSELL_ESTIMATORS_HPP_
#define WICKSELL_ESTIMATORS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wicksell/isotonize.hpp"
#include "wicksell/measures.hpp"
#include "wicksell/model.hpp"
#include "wicksell/transform.hpp"

namespace wicksell {

enum class Target { VNaive, VIso, FNaive, FIso };

std::string to_string(Target target);

// Row-major n_draws x n_queries matrix.
class DrawMatrix {
 public:
  DrawMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const;
  std::vector<double> column(std::size_t c) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct EnsembleSettings {
  std::uint64_t seed = 0;
  BaseMeasureSpec prior;
  std::size_t n_draws = 300;
  double truncation_tol = kDefaultTruncationTol;
  // 0 picks default_threads().
  std::size_t threads = 0;
};

struct PosteriorEnsemble {
  QueryGrid queries;
  DrawMatrix draws;
  Target target;
  EnsembleSettings settings;

  std::vector<double> mean() const;
};

// The V- and F-level surfaces computed from the same posterior draws.
struct EnsemblePair {
  PosteriorEnsemble v;
  PosteriorEnsemble f;
};

struct CredibleBand {
  QueryGrid queries;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha;
};

// WICKSELL_THREADS if set and positive, else the hardware concurrency.
std::size_t default_threads();

struct IsotonicEstimate {
  StepFn vhat;
  std::vector<double> v;  // vhat at the queries
  std::vector<double> f;  // f_hat at the queries
};

// Isotonized inverse estimator from the empirical measure of the data.
IsotonicEstimate iie(std::span<const double> data, const QueryGrid& queries);

// Isotonized DP-posterior draws. Draw d uses Seed(seed).child(d).
EnsemblePair iip_ensemble(std::span<const double> data,
                          const EnsembleSettings& settings,
                          const QueryGrid& queries);

// Naive (plug-in) DP-posterior draws; each query is moved off the draw's
// atoms by jitter_off_atoms.
EnsemblePair nbp_ensemble(std::span<const double> data,
                          const EnsembleSettings& settings,
                          const QueryGrid& queries);

// Inf-type empirical quantile: the k-th order statistic with
// k = ceil(p * N) (1-based, clamped to [1, N]).
double empirical_quantile(std::span<const double> sorted, double p);
std::size_t quantile_rank(std::size_t n, double p);

CredibleBand credible_band(const PosteriorEnsemble& ensemble, double alpha);

// Multinomial percentile bootstrap of the IIE.
CredibleBand bootstrap_iie_band(std::span<const double> data,
                                std::size_t n_boot, const QueryGrid& queries,
                                double alpha, std::uint64_t seed,
                                Target target = Target::FIso,
                                std::size_t threads = 0);

struct NormalityResult {
  double anderson_darling;  // A*^2 with the small-sample modification
  double p_value;
  double qq_correlation;
};

// Anderson-Darling test against the fitted normal plus the correlation of the
// normal QQ plot (Blom plotting positions).
NormalityResult normality_diagnostic(std::span<const double> values);

// sqrt(log n / n).
double delta_n(std::size_t n);
// delta_n^(1 / gamma).
double delta_n_star(std::size_t n, double gamma);

struct ExperimentSettings {
  std::size_t n = 2000;
  double x = 1.5;
  std::size_t n_reps = 200;
  std::size_t n_draws = 300;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  double prior_mass = 1.0;
  double truncation_tol = kDefaultTruncationTol;
  // Bootstrap comparator; 0 disables it.
  std::size_t n_boot = 0;
  std::size_t threads = 0;
};

struct CoverageReport {
  std::string model;
  ExperimentSettings settings;
  double truth = 0.0;  // F0(x)
  double coverage_rate = 0.0;
  double mean_ci_width = 0.0;
  std::vector<double> widths;
  std::vector<int> covered;
  std::optional<double> bootstrap_coverage_rate;
  std::optional<double> mean_bootstrap_width;
  std::vector<double> bootstrap_widths;
  // Posterior variance of F_hat_G(x), averaged over replications.
  double empirical_variance = 0.0;
  // Asymptotic variance of sqrt(n / log n)(F_hat_G - F_hat_n):
  // 2 x g0(x) / (pi^2 gamma).
  double theoretical_variance = 0.0;
  NormalityResult final_normality{};
  double delta = 0.0;
  double delta_star = 0.0;
  double wall_time_seconds = 0.0;
};

CoverageReport coverage_experiment(const TrueModel& model,
                                   const ExperimentSettings& settings);

struct VarianceReport {
  std::string model;
  ExperimentSettings settings;
  double g0 = 0.0;
  double gamma = 1.0;
  // Per replication: posterior variance of sqrt(n / log n)(V_hat_G - V_hat_n)
  // and of sqrt(n / log n)(V_G - V_n).
  std::vector<double> iip_variance;
  std::vector<double> nbp_variance;
  std::vector<double> iip_ratio;  // iip_variance / (g0 / (2 gamma))
  std::vector<double> nbp_ratio;  // nbp_variance / g0
  std::vector<double> iip_over_nbp;
  std::vector<double> qq_correlation;  // IIP F-draws at x
  double mean_iip_ratio = 0.0;
  double mean_nbp_ratio = 0.0;
  double fraction_iip_over_nbp_below = 0.0;  // fraction with ratio < 0.7
  double fraction_qq_above = 0.0;            // fraction with QQ corr > 0.99
  double delta = 0.0;
  double delta_star = 0.0;
  double wall_time_seconds = 0.0;
};

// IIP and NBP functionals evaluated on the same posterior draws.
VarianceReport variance_experiment(const TrueModel& model,
                                   const ExperimentSettings& settings);

}  // namespace wicksell

#endif  // WICKSELL_ESTIMATORS_HPP_
