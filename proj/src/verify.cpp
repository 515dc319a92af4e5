#include "wicksell/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "wicksell/errors.hpp"
#include "wicksell/synthetic.hpp"
#include "wicksell/transform.hpp"

namespace wicksell {
namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double value) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << value;
  return os.str();
}

CheckResult finish(CheckResult result, Clock::time_point start) {
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

// Sorted union of an equispaced grid on [0, top] with the positive atoms.
std::vector<double> grid_with_atoms(const DiscreteMeasure& m, double top,
                                    std::size_t points) {
  std::vector<double> grid;
  grid.reserve(points + m.size());
  for (std::size_t k = 0; k < points; ++k) {
    grid.push_back(top * static_cast<double>(k) /
                   static_cast<double>(points - 1));
  }
  for (double z : m.atoms()) grid.push_back(z);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// V_G(hi - t^2) with z - s formed as (z - hi) + t^2, exact for the atom at hi.
double v_below_atom(const DiscreteMeasure& m, std::size_t first, double hi,
                    double t) {
  const auto atoms = m.atoms();
  const auto weights = m.weights();
  double v = 0.0;
  for (std::size_t i = first; i < atoms.size(); ++i) {
    v += weights[i] / std::sqrt((atoms[i] - hi) + t * t);
  }
  return v;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

DiscreteMeasure random_measure(RandomStream& rng, std::size_t max_atoms) {
  const std::size_t k = 1 + rng.index(max_atoms);
  std::vector<double> atoms(k);
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i) {
    atoms[i] = 10.0 * rng.open_uniform();
    weights[i] = rng.exponential();
  }
  return DiscreteMeasure::normalized(std::move(atoms), std::move(weights));
}

double arcsin_tail_quadrature(const DiscreteMeasure& measure, double x,
                              double abs_tol) {
  const auto atoms = measure.atoms();
  const auto first_above =
      static_cast<std::size_t>(std::upper_bound(atoms.begin(), atoms.end(), x) -
                               atoms.begin());
  const std::size_t pieces = atoms.size() - first_above;
  if (pieces == 0) return 0.0;
  QuadOptions opts;
  opts.abs_tol = abs_tol / static_cast<double>(pieces + 1);

  double total = 0.0;
  double lo = x;
  for (std::size_t j = first_above; j < atoms.size(); ++j) {
    const double hi = atoms[j];
    // s = hi - t^2 on [lo, hi]; ds / (2 sqrt s) = t dt / sqrt s.
    auto near_atom = [&measure, j, hi](double t) {
      const double s = hi - t * t;
      return t * v_below_atom(measure, j, hi, t) / std::sqrt(s);
    };
    if (lo == 0.0) {
      // s = u^2 on [0, hi / 2]: ds / (2 sqrt s) = du.
      const double mid = 0.5 * hi;
      auto near_zero = [&measure, j, hi](double u) {
        const double s = u * u;
        return v_below_atom(measure, j, hi, std::sqrt(hi - s));
      };
      total += integrate_adaptive(near_zero, 0.0, std::sqrt(mid), opts).value;
      total += integrate_adaptive(near_atom, 0.0, std::sqrt(hi - mid), opts)
                   .value;
    } else {
      total += integrate_adaptive(near_atom, 0.0, std::sqrt(hi - lo), opts).value;
    }
    lo = hi;
  }
  return total;
}

std::vector<std::size_t> gift_wrap_hull(std::span<const double> xs,
                                        std::span<const double> ys) {
  std::vector<std::size_t> hull{0};
  std::size_t k = 0;
  while (k + 1 < xs.size()) {
    std::size_t best = k + 1;
    double best_slope = (ys[best] - ys[k]) / (xs[best] - xs[k]);
    for (std::size_t j = k + 2; j < xs.size(); ++j) {
      const double slope = (ys[j] - ys[k]) / (xs[j] - xs[k]);
      if (slope >= best_slope) {
        best_slope = slope;
        best = j;
      }
    }
    hull.push_back(best);
    k = best;
  }
  return hull;
}

double u0_oracle(const TrueModel& model, double x, const QuadOptions& options) {
  if (!(x >= 0.0)) throw InvalidInput("u0_oracle needs x >= 0");
  if (x == 0.0) return 0.0;
  auto integrand = [&model, x](double u) {
    const double q = model.survival_quantile(u);
    if (!(q > 0.0)) return 0.0;
    if (std::isinf(q)) return 0.0;
    return std::min(q, x) / std::sqrt(q);
  };
  std::vector<double> breaks;
  const double kink = model.survival(x);
  if (kink > 0.0 && kink < 1.0) breaks.push_back(kink);
  for (double s : model.singular_points()) {
    const double u = model.survival(s);
    if (u > 0.0 && u < 1.0) breaks.push_back(u);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadOptions scaled = options;
  scaled.abs_tol = options.abs_tol / (0.5 * std::numbers::pi);
  return 0.5 * std::numbers::pi *
         integrate_adaptive(integrand, 0.0, 1.0, scaled, breaks).value;
}

CheckResult check_f0_roundtrip(const TrueModel& model,
                               const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"f0_roundtrip " + model.spec(), false, 0.0, options.f0_tol, "",
                0.0};
  const double end = model.support_end();
  const double top = std::isfinite(end) ? end : model.quantile(0.995);
  const TailSpec tail = TailSpec::of(model);
  QuadOptions inner;
  inner.abs_tol = 1e-11;
  QuadOptions outer;
  outer.abs_tol = 1e-9;
  auto v_fn = [&model, &inner](double s) { return v0_oracle(model, s, inner); };
  double worst_x = 0.0;
  const std::size_t n = std::max<std::size_t>(options.grid_points, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = top * static_cast<double>(k) / static_cast<double>(n - 1);
    const double err = std::abs(f0_from_v(v_fn, x, tail, outer) - model.cdf(x));
    if (err > r.worst) {
      r.worst = err;
      worst_x = x;
    }
  }
  r.passed = r.worst <= options.f0_tol;
  r.detail = "max |F - F0| = " + fmt(r.worst) + " at x = " + fmt(worst_x) +
             " over " + std::to_string(n) + " points";
  return finish(r, start);
}

CheckResult check_arcsin_identity(const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"arcsin_identity", false, 0.0, options.arcsin_tol, "", 0.0};
  RandomStream rng = Seed(options.seed).child(1).stream();
  for (std::size_t m = 0; m < options.n_measures; ++m) {
    const DiscreteMeasure g = random_measure(rng, options.max_atoms);
    const double x = m % 10 == 0 ? 0.0 : 1.05 * g.max_atom() * rng.uniform();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      sum += g.weights()[i] *
             std::asin(std::sqrt(std::min(1.0, x / g.atoms()[i])));
    }
    const double identity = options.arcsin_constant - sum;
    const double quad = arcsin_tail_quadrature(g, x, 1e-11);
    const double lib = arcsin_tail(g, x);
    r.worst = std::max({r.worst, std::abs(identity - quad),
                        std::abs(lib - quad)});
  }
  r.passed = r.worst <= options.arcsin_tol;
  r.detail = "max deviation from quadrature " + fmt(r.worst) + " over " +
             std::to_string(options.n_measures) + " measures";
  return finish(r, start);
}

CheckResult check_hull_bruteforce(const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"hull_bruteforce", false, 0.0, options.hull_tol, "", 0.0};
  RandomStream rng = Seed(options.seed).child(2).stream();
  std::size_t dominance_violations = 0;
  for (std::size_t m = 0; m < options.n_measures; ++m) {
    const DiscreteMeasure g = random_measure(rng, options.max_atoms);
    const std::vector<Point> points = u_points(g);
    const ConcaveMajorantFn hull = lcm_from_points(points);
    const StepFn vhat = hull.right_derivative();

    const std::vector<double> xs =
        grid_with_atoms(g, 1.05 * g.max_atom(), options.hull_grid);
    std::vector<double> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = u_of(g, xs[k]);
    const std::vector<std::size_t> idx = gift_wrap_hull(xs, ys);

    for (std::size_t h = 0; h + 1 < idx.size(); ++h) {
      const std::size_t a = idx[h];
      const std::size_t b = idx[h + 1];
      const double slope = (ys[b] - ys[a]) / (xs[b] - xs[a]);
      for (std::size_t k = a; k < b; ++k) {
        const double mid = 0.5 * (xs[k] + xs[k + 1]);
        r.worst = std::max(r.worst, std::abs(vhat(mid) - slope));
      }
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (hull(xs[k]) < ys[k] - 1e-12 * (1.0 + std::abs(ys[k]))) {
        ++dominance_violations;
      }
    }
  }
  r.passed = r.worst <= options.hull_tol && dominance_violations == 0;
  r.detail = "max slope difference " + fmt(r.worst) + ", " +
             std::to_string(dominance_violations) +
             " majorant violations over " + std::to_string(options.n_measures) +
             " measures";
  return finish(r, start);
}

CheckResult check_pava_projection(const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"pava_projection", false, 0.0, options.pava_tol, "", 0.0};
  RandomStream rng = Seed(options.seed).child(3).stream();
  const std::size_t grid = std::max<std::size_t>(options.hull_grid / 10, 10);
  for (std::size_t m = 0; m < options.n_measures; ++m) {
    const DiscreteMeasure g = random_measure(rng, options.max_atoms);
    const StepFn vhat = isotonize_measure(g);
    const std::vector<double> xs = grid_with_atoms(g, 1.05 * g.max_atom(), grid);
    // Cell averages of V are exact increments of U.
    std::vector<double> means(xs.size() - 1);
    std::vector<double> widths(xs.size() - 1);
    double prev = u_of(g, xs[0]);
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double next = u_of(g, xs[k + 1]);
      widths[k] = xs[k + 1] - xs[k];
      means[k] = (next - prev) / widths[k];
      prev = next;
    }
    const std::vector<double> fitted = pava_decreasing(means, widths);
    for (std::size_t k = 0; k < fitted.size(); ++k) {
      const double mid = 0.5 * (xs[k] + xs[k + 1]);
      r.worst = std::max(r.worst, std::abs(vhat(mid) - fitted[k]));
    }
  }
  r.passed = r.worst <= options.pava_tol;
  r.detail = "max |V_hat - PAVA| = " + fmt(r.worst);
  return finish(r, start);
}

CheckResult check_switch_relation(const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"switch_relation", false, 0.0, 0.0, "", 0.0};
  RandomStream rng = Seed(options.seed).child(4).stream();
  std::size_t violations = 0;
  const std::size_t per_measure = 10;
  std::vector<Point> points;
  std::optional<StepFn> vhat;
  double top = 0.0;
  for (std::size_t p = 0; p < options.switch_pairs; ++p) {
    if (p % per_measure == 0) {
      const DiscreteMeasure g = random_measure(rng, options.max_atoms);
      points = u_points(g);
      vhat = lcm_from_points(points).right_derivative();
      top = g.max_atom();
    }
    const double a = 1.2 * (*vhat)(0.0) * rng.uniform();
    const double x = 1.1 * top * rng.uniform();
    const bool left = switch_argmax(points, a) <= x;
    const bool right = (*vhat)(x) <= a;
    if (left != right) ++violations;
  }
  r.worst = static_cast<double>(violations);
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " violations in " +
             std::to_string(options.switch_pairs) + " pairs";
  return finish(r, start);
}

CheckResult check_marshall(const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"marshall_inequality", true, 0.0, options.marshall_slack, "",
                0.0};
  std::ostringstream detail;
  const TrueModel models[] = {TrueModel::exponential(1.2),
                              TrueModel::holder_peak(0.8)};
  std::uint64_t salt = 0;
  for (const TrueModel& model : models) {
    const SampleSet sample =
        sample_observables(model, 200, Seed(options.seed).child(5 + salt++).value());
    const DiscreteMeasure g = empirical_measure(sample.z_values);
    const ConcaveMajorantFn hull = lcm_from_points(u_points(g));
    const std::vector<double> xs = grid_with_atoms(g, 1.5 * g.max_atom(), 400);
    double lhs = 0.0;
    double rhs = 0.0;
    for (double x : xs) {
      const double u0 = u0_oracle(model, x);
      lhs = std::max(lhs, std::abs(hull(x) - u0));
      rhs = std::max(rhs, std::abs(u_of(g, x) - u0));
    }
    r.worst = std::max(r.worst, lhs - rhs);
    if (lhs > rhs + options.marshall_slack) r.passed = false;
    detail << model.spec() << ": sup|U*-U0| = " << fmt(lhs)
           << " vs sup|U-U0| = " << fmt(rhs) << "; ";
  }
  r.detail = detail.str();
  return finish(r, start);
}

CheckResult check_v0_reduction(const TrueModel& model,
                               const VerifyOptions& options) {
  const auto start = Clock::now();
  CheckResult r{"v0_reduction " + model.spec(), false, 0.0, options.v0_tol, "",
                0.0};
  RandomStream rng = Seed(options.seed).child(6).stream();
  const double end = model.support_end();
  const double top = std::isfinite(end) ? end : model.quantile(0.99);
  QuadOptions opts;
  opts.abs_tol = 1e-8;
  for (std::size_t k = 0; k < options.v0_points; ++k) {
    const double x = 0.9 * top * rng.uniform();
    const double reduced = v0_oracle(model, x, opts);
    const double literal = v0_double_integral(model, x, opts);
    r.worst = std::max(r.worst, std::abs(reduced - literal));
  }
  r.passed = r.worst <= options.v0_tol;
  r.detail = "max |reduced - double integral| = " + fmt(r.worst) + " at " +
             std::to_string(options.v0_points) + " points";
  return finish(r, start);
}

VerifyReport run_verify(const VerifyOptions& options) {
  const TrueModel exp_model = TrueModel::exponential(1.2);
  const TrueModel peak = TrueModel::holder_peak(0.8);
  VerifyReport report;
  report.checks.push_back(check_f0_roundtrip(exp_model, options));
  report.checks.push_back(check_f0_roundtrip(peak, options));
  report.checks.push_back(check_arcsin_identity(options));
  report.checks.push_back(check_hull_bruteforce(options));
  report.checks.push_back(check_pava_projection(options));
  report.checks.push_back(check_switch_relation(options));
  report.checks.push_back(check_marshall(options));
  report.checks.push_back(check_v0_reduction(exp_model, options));
  report.checks.push_back(check_v0_reduction(peak, options));
  return report;
}

}  // namespace wicksell
