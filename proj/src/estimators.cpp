#include "wicksell/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "wicksell/errors.hpp"
#include "wicksell/rng.hpp"
#include "wicksell/synthetic.hpp"

namespace wicksell {
namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// handled exactly once; the first exception is rethrown after all workers
// stop.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (threads == 0) threads = default_threads();
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

double sample_variance(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  if (values.size() < 2) throw InvalidInput("variance needs two values");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / (n - 1.0);
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("alpha must lie in (0, 1)");
  }
}

void check_enough_draws(std::size_t n_draws, double alpha) {
  const auto needed = static_cast<std::size_t>(std::ceil(2.0 / alpha));
  if (n_draws < needed) {
    throw InvalidInput("need at least " + std::to_string(needed) +
                       " draws for alpha " + std::to_string(alpha) +
                       ", got " + std::to_string(n_draws));
  }
}

std::pair<double, double> band_at(std::vector<double> values, double alpha) {
  std::sort(values.begin(), values.end());
  return {empirical_quantile(values, alpha / 2.0),
          empirical_quantile(values, 1.0 - alpha / 2.0)};
}

CredibleBand band_from_matrix(const DrawMatrix& draws, const QueryGrid& queries,
                              double alpha) {
  check_alpha(alpha);
  check_enough_draws(draws.rows(), alpha);
  CredibleBand band{queries, {}, {}, alpha};
  band.lower.reserve(draws.cols());
  band.upper.reserve(draws.cols());
  for (std::size_t c = 0; c < draws.cols(); ++c) {
    const auto [lo, hi] = band_at(draws.column(c), alpha);
    band.lower.push_back(lo);
    band.upper.push_back(hi);
  }
  return band;
}

DPPosterior posterior_for(std::span<const double> data,
                          const EnsembleSettings& settings) {
  return DPPosterior(settings.prior,
                     std::vector<double>(data.begin(), data.end()));
}

void check_settings(const EnsembleSettings& settings) {
  if (settings.n_draws == 0) throw InvalidInput("need at least one draw");
}

EnsembleSettings ensemble_settings(std::span<const double> data,
                                   const ExperimentSettings& s,
                                   std::uint64_t seed) {
  const BaseMeasureSpec fitted = BaseMeasureSpec::default_for(data);
  return {seed, BaseMeasureSpec(s.prior_mass, fitted.family()), s.n_draws,
          s.truncation_tol, s.threads};
}

}  // namespace

std::string to_string(Target target) {
  switch (target) {
    case Target::VNaive:
      return "V_naive";
    case Target::VIso:
      return "V_iso";
    case Target::FNaive:
      return "F_naive";
    case Target::FIso:
      return "F_iso";
  }
  return "unknown";
}

DrawMatrix::DrawMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

std::span<const double> DrawMatrix::row(std::size_t r) const {
  return std::span<const double>(data_).subspan(r * cols_, cols_);
}

std::vector<double> DrawMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<double> PosteriorEnsemble::mean() const {
  std::vector<double> out(draws.cols(), 0.0);
  for (std::size_t r = 0; r < draws.rows(); ++r) {
    for (std::size_t c = 0; c < draws.cols(); ++c) out[c] += draws(r, c);
  }
  for (double& v : out) v /= static_cast<double>(draws.rows());
  return out;
}

std::size_t default_threads() {
  if (const char* env = std::getenv("WICKSELL_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<std::size_t>(value);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

IsotonicEstimate iie(std::span<const double> data, const QueryGrid& queries) {
  StepFn vhat = isotonize_measure(empirical_measure(data));
  IsotonicEstimate out{vhat, {}, {}};
  out.v.reserve(queries.size());
  out.f.reserve(queries.size());
  for (double x : queries.points()) {
    out.v.push_back(vhat(x));
    out.f.push_back(f_hat(vhat, x));
  }
  return out;
}

EnsemblePair iip_ensemble(std::span<const double> data,
                          const EnsembleSettings& settings,
                          const QueryGrid& queries) {
  check_settings(settings);
  const DPPosterior posterior = posterior_for(data, settings);
  EnsemblePair out{
      {queries, DrawMatrix(settings.n_draws, queries.size()), Target::VIso,
       settings},
      {queries, DrawMatrix(settings.n_draws, queries.size()), Target::FIso,
       settings}};
  const Seed root(settings.seed);
  parallel_for(settings.n_draws, settings.threads, [&](std::size_t d) {
    RandomStream rng = root.child(d).stream();
    const DiscreteMeasure g =
        draw_dp_posterior(posterior, rng, settings.truncation_tol);
    const StepFn vhat = isotonize_measure(g);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      out.v.draws(d, q) = vhat(queries[q]);
      out.f.draws(d, q) = f_hat(vhat, queries[q]);
    }
  });
  return out;
}

EnsemblePair nbp_ensemble(std::span<const double> data,
                          const EnsembleSettings& settings,
                          const QueryGrid& queries) {
  check_settings(settings);
  const DPPosterior posterior = posterior_for(data, settings);
  EnsemblePair out{
      {queries, DrawMatrix(settings.n_draws, queries.size()), Target::VNaive,
       settings},
      {queries, DrawMatrix(settings.n_draws, queries.size()), Target::FNaive,
       settings}};
  const Seed root(settings.seed);
  parallel_for(settings.n_draws, settings.threads, [&](std::size_t d) {
    RandomStream rng = root.child(d).stream();
    const DiscreteMeasure g =
        draw_dp_posterior(posterior, rng, settings.truncation_tol);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const double x = jitter_off_atoms(g, queries[q]);
      out.v.draws(d, q) = v_of(g, x);
      out.f.draws(d, q) = f_naive(g, x);
    }
  });
  return out;
}

std::size_t quantile_rank(std::size_t n, double p) {
  if (n == 0) throw InvalidInput("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("quantile level outside [0, 1]");
  // Guard against p * n landing a rounding error above an integer.
  const double k = std::ceil(p * static_cast<double>(n) - 1e-9);
  return static_cast<std::size_t>(
      std::clamp(k, 1.0, static_cast<double>(n)));
}

double empirical_quantile(std::span<const double> sorted, double p) {
  return sorted[quantile_rank(sorted.size(), p) - 1];
}

CredibleBand credible_band(const PosteriorEnsemble& ensemble, double alpha) {
  return band_from_matrix(ensemble.draws, ensemble.queries, alpha);
}

CredibleBand bootstrap_iie_band(std::span<const double> data,
                                std::size_t n_boot, const QueryGrid& queries,
                                double alpha, std::uint64_t seed,
                                Target target, std::size_t threads) {
  check_alpha(alpha);
  check_enough_draws(n_boot, alpha);
  if (data.empty()) throw InvalidInput("bootstrap needs data");
  if (target != Target::VIso && target != Target::FIso) {
    throw InvalidInput("bootstrap band is defined for the isotonized targets");
  }
  DrawMatrix draws(n_boot, queries.size());
  const Seed root(seed);
  parallel_for(n_boot, threads, [&](std::size_t b) {
    RandomStream rng = root.child(b).stream();
    std::vector<double> resample(data.size());
    for (double& z : resample) z = data[rng.index(data.size())];
    const StepFn vhat = isotonize_measure(empirical_measure(resample));
    for (std::size_t q = 0; q < queries.size(); ++q) {
      draws(b, q) = target == Target::VIso ? vhat(queries[q])
                                           : f_hat(vhat, queries[q]);
    }
  });
  return band_from_matrix(draws, queries, alpha);
}

NormalityResult normality_diagnostic(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 50) throw InvalidInput("normality diagnostic needs at least 50 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double mean = mean_of(sorted);
  const double var = sample_variance(sorted);
  if (!(var > 0.0) || sorted.front() == sorted.back()) {
    throw DiagnosticError("normality diagnostic on zero-variance draws");
  }
  const double sd = std::sqrt(var);
  const double nd = static_cast<double>(n);

  const auto log_cdf = [](double y) {
    return std::log(std::max(0.5 * std::erfc(-y / std::numbers::sqrt2),
                             std::numeric_limits<double>::min()));
  };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = (sorted[i] - mean) / sd;
    const double hi = (sorted[n - 1 - i] - mean) / sd;
    s += (2.0 * static_cast<double>(i) + 1.0) * (log_cdf(lo) + log_cdf(-hi));
  }
  const double a2 = -nd - s / nd;
  const double a = a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));

  double p = 0.0;
  if (a >= 0.6) {
    p = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  } else if (a >= 0.34) {
    p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  } else if (a >= 0.2) {
    p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  } else {
    p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  }
  p = std::clamp(p, 0.0, 1.0);

  const boost::math::normal standard;
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double level = (static_cast<double>(i + 1) - 0.375) / (nd + 0.25);
    scores[i] = boost::math::quantile(standard, level);
  }
  const double score_mean = mean_of(scores);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = scores[i] - score_mean;
    const double dy = sorted[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return {a, p, sxy / std::sqrt(sxx * syy)};
}

double delta_n(std::size_t n) {
  if (n < 2) throw InvalidInput("delta_n needs n >= 2");
  const double nd = static_cast<double>(n);
  return std::sqrt(std::log(nd) / nd);
}

double delta_n_star(std::size_t n, double gamma) {
  if (!(gamma > 0.0)) throw InvalidInput("delta_n_star needs gamma > 0");
  return std::pow(delta_n(n), 1.0 / gamma);
}

CoverageReport coverage_experiment(const TrueModel& model,
                                   const ExperimentSettings& s) {
  const auto start = std::chrono::steady_clock::now();
  if (s.n_reps == 0) throw InvalidInput("need at least one replication");
  check_alpha(s.alpha);
  check_enough_draws(s.n_draws, s.alpha);
  if (s.n_boot > 0) check_enough_draws(s.n_boot, s.alpha);

  const double gamma = model.gamma().value_or(1.0);
  const ModelTruth truth = model_truth(model, s.x);
  const QueryGrid query({s.x});
  const double scale =
      static_cast<double>(s.n) / std::log(static_cast<double>(s.n));

  CoverageReport report;
  report.model = model.spec();
  report.settings = s;
  report.truth = truth.f0;
  report.theoretical_variance =
      2.0 * s.x * truth.g0 / (std::numbers::pi * std::numbers::pi * gamma);
  report.delta = delta_n(s.n);
  report.delta_star = delta_n_star(s.n, gamma);
  report.widths.reserve(s.n_reps);
  report.covered.reserve(s.n_reps);

  std::vector<double> variances;
  std::size_t boot_hits = 0;
  const Seed root(s.seed);
  for (std::size_t r = 0; r < s.n_reps; ++r) {
    const Seed rep = root.child(r);
    const SampleSet data = sample_observables(model, s.n, rep.child(0).value());
    const EnsembleSettings es =
        ensemble_settings(data.z_values, s, rep.child(1).value());
    const EnsemblePair ens = iip_ensemble(data.z_values, es, query);
    const CredibleBand band = credible_band(ens.f, s.alpha);
    const bool hit = band.lower[0] <= truth.f0 && truth.f0 <= band.upper[0];
    report.covered.push_back(hit ? 1 : 0);
    report.widths.push_back(band.upper[0] - band.lower[0]);
    const std::vector<double> column = ens.f.draws.column(0);
    variances.push_back(scale * sample_variance(column));
    if (r + 1 == s.n_reps) report.final_normality = normality_diagnostic(column);

    if (s.n_boot > 0) {
      const CredibleBand boot =
          bootstrap_iie_band(data.z_values, s.n_boot, query, s.alpha,
                             rep.child(2).value(), Target::FIso, s.threads);
      report.bootstrap_widths.push_back(boot.upper[0] - boot.lower[0]);
      if (boot.lower[0] <= truth.f0 && truth.f0 <= boot.upper[0]) ++boot_hits;
    }
  }
  const double reps = static_cast<double>(s.n_reps);
  report.coverage_rate =
      static_cast<double>(std::accumulate(report.covered.begin(),
                                          report.covered.end(), 0)) /
      reps;
  report.mean_ci_width = mean_of(report.widths);
  report.empirical_variance = mean_of(variances);
  if (s.n_boot > 0) {
    report.bootstrap_coverage_rate = static_cast<double>(boot_hits) / reps;
    report.mean_bootstrap_width = mean_of(report.bootstrap_widths);
  }
  report.wall_time_seconds = seconds_since(start);
  return report;
}

VarianceReport variance_experiment(const TrueModel& model,
                                   const ExperimentSettings& s) {
  const auto start = std::chrono::steady_clock::now();
  if (s.n_reps == 0) throw InvalidInput("need at least one replication");
  if (s.n_draws < 2) throw InvalidInput("need at least two draws");

  VarianceReport report;
  report.model = model.spec();
  report.settings = s;
  report.gamma = model.gamma().value_or(1.0);
  report.g0 = model_truth(model, s.x).g0;
  report.delta = delta_n(s.n);
  report.delta_star = delta_n_star(s.n, report.gamma);
  const double scale =
      static_cast<double>(s.n) / std::log(static_cast<double>(s.n));
  const double iip_target = report.g0 / (2.0 * report.gamma);

  const Seed root(s.seed);
  for (std::size_t r = 0; r < s.n_reps; ++r) {
    const Seed rep = root.child(r);
    const SampleSet data = sample_observables(model, s.n, rep.child(0).value());
    const EnsembleSettings es =
        ensemble_settings(data.z_values, s, rep.child(1).value());
    const DPPosterior posterior = posterior_for(data.z_values, es);

    std::vector<double> iso(s.n_draws);
    std::vector<double> naive(s.n_draws);
    std::vector<double> f_iso(s.n_draws);
    const Seed draws(es.seed);
    parallel_for(s.n_draws, s.threads, [&](std::size_t d) {
      RandomStream rng = draws.child(d).stream();
      const DiscreteMeasure g =
          draw_dp_posterior(posterior, rng, es.truncation_tol);
      const StepFn vhat = isotonize_measure(g);
      iso[d] = vhat(s.x);
      f_iso[d] = f_hat(vhat, s.x);
      naive[d] = v_of(g, jitter_off_atoms(g, s.x));
    });

    // Centering at the same-data estimator does not change the variance.
    const double vi = scale * sample_variance(iso);
    const double vn = scale * sample_variance(naive);
    report.iip_variance.push_back(vi);
    report.nbp_variance.push_back(vn);
    report.iip_ratio.push_back(vi / iip_target);
    report.nbp_ratio.push_back(vn / report.g0);
    report.iip_over_nbp.push_back(vi / vn);
    report.qq_correlation.push_back(
        s.n_draws >= 50 ? normality_diagnostic(f_iso).qq_correlation : 0.0);
  }
  const double reps = static_cast<double>(s.n_reps);
  report.mean_iip_ratio = mean_of(report.iip_ratio);
  report.mean_nbp_ratio = mean_of(report.nbp_ratio);
  report.fraction_iip_over_nbp_below =
      static_cast<double>(std::count_if(report.iip_over_nbp.begin(),
                                        report.iip_over_nbp.end(),
                                        [](double v) { return v < 0.7; })) /
      reps;
  report.fraction_qq_above =
      static_cast<double>(std::count_if(report.qq_correlation.begin(),
                                        report.qq_correlation.end(),
                                        [](double v) { return v > 0.99; })) /
      reps;
  report.wall_time_seconds = seconds_since(start);
  return report;
}

}  // namespace wicksell
