#include "wicksell/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wicksell/errors.hpp"

namespace wicksell {
namespace {

constexpr double kPi = std::numbers::pi;

void check_query(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw InvalidInput("evaluation point must be finite and nonnegative");
  }
}

// Index of the first atom strictly above x.
std::size_t first_above(std::span<const double> atoms, double x) {
  return static_cast<std::size_t>(
      std::upper_bound(atoms.begin(), atoms.end(), x) - atoms.begin());
}

double parse_grid_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInput("bad grid spec '" + spec + "'");
  }
  if (used != text.size()) throw InvalidInput("bad grid spec '" + spec + "'");
  return value;
}

}  // namespace

QueryGrid::QueryGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInput("query grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    check_query(points_[i]);
    if (i > 0 && points_[i] < points_[i - 1]) {
      throw InvalidInput("query grid must be sorted");
    }
  }
}

QueryGrid QueryGrid::parse(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second =
      first == std::string::npos ? first : spec.find(':', first + 1);
  if (second == std::string::npos) {
    throw InvalidInput("grid spec must look like start:stop:steps, got '" +
                       spec + "'");
  }
  const double start = parse_grid_number(spec.substr(0, first), spec);
  const double stop =
      parse_grid_number(spec.substr(first + 1, second - first - 1), spec);
  const double steps_value = parse_grid_number(spec.substr(second + 1), spec);
  if (!(steps_value >= 1.0) || steps_value != std::floor(steps_value) ||
      steps_value > 1e7) {
    throw InvalidInput("grid steps must be a positive integer");
  }
  if (!(start >= 0.0) || !(stop >= start)) {
    throw InvalidInput("grid needs 0 <= start <= stop");
  }
  const auto steps = static_cast<std::size_t>(steps_value);
  std::vector<double> points(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    points[i] = start + (stop - start) * static_cast<double>(i) /
                            static_cast<double>(steps);
  }
  points.back() = stop;
  return QueryGrid(std::move(points));
}

double v_of(const DiscreteMeasure& measure, double x) {
  check_query(x);
  const auto atoms = measure.atoms();
  const auto weights = measure.weights();
  // Nothing lies strictly above the largest atom, so V vanishes there even
  // though x sits on an atom.
  if (x >= atoms.back()) return 0.0;
  const std::size_t start = first_above(atoms, x);
  if (start > 0 && atoms[start - 1] == x) throw SingularityError(x);
  double total = 0.0;
  for (std::size_t i = start; i < atoms.size(); ++i) {
    total += weights[i] / std::sqrt(atoms[i] - x);
  }
  return total;
}

double u_of(const DiscreteMeasure& measure, double x) {
  check_query(x);
  const auto atoms = measure.atoms();
  const auto weights = measure.weights();
  // 2 sum_{z <= x} w sqrt(z) + 2 sum_{z > x} w (sqrt(z) - sqrt(z - x)), the
  // second difference written without cancellation.
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double z = atoms[i];
    if (z <= x) {
      total += weights[i] * std::sqrt(z);
    } else {
      total += weights[i] * x / (std::sqrt(z) + std::sqrt(z - x));
    }
  }
  return 2.0 * total;
}

__attribute__((target_clones("avx2", "default")))
std::vector<double> u_at_atoms(const DiscreteMeasure& measure) {
  const auto atoms = measure.atoms();
  const auto weights = measure.weights();
  const std::size_t m = atoms.size();
  std::vector<double> root(m);
  for (std::size_t i = 0; i < m; ++i) root[i] = std::sqrt(atoms[i]);

  std::vector<double> u(m);
  double below = 0.0;  // sum_{i <= j} w_i sqrt(z_i)
  for (std::size_t j = 0; j < m; ++j) {
    const double x = atoms[j];
    below += weights[j] * root[j];
    double above = 0.0;
    const double* z = atoms.data();
    const double* w = weights.data();
    const double* r = root.data();
#pragma omp simd reduction(+ : above)
    for (std::size_t i = j + 1; i < m; ++i) {
      above += w[i] / (r[i] + std::sqrt(z[i] - x));
    }
    u[j] = 2.0 * (below + x * above);
  }
  return u;
}

double arcsin_tail(const DiscreteMeasure& measure, double x) {
  check_query(x);
  const auto atoms = measure.atoms();
  const auto weights = measure.weights();
  if (x > 0.0 && atoms.front() == 0.0) {
    throw NumericDomainError(
        "arcsin tail undefined for an atom at 0 with x > 0");
  }
  // pi/2 - asin(sqrt(x/z)) = atan2(sqrt(z - x), sqrt(x)) for z > x; atoms at
  // or below x contribute nothing.
  const double root_x = std::sqrt(x);
  double total = 0.0;
  for (std::size_t i = first_above(atoms, x); i < atoms.size(); ++i) {
    total += weights[i] * std::atan2(std::sqrt(atoms[i] - x), root_x);
  }
  return total;
}

double f_naive(const DiscreteMeasure& measure, double x) {
  const double v = v_of(measure, x);
  return 1.0 - (2.0 / kPi) * std::sqrt(x) * v -
         (2.0 / kPi) * arcsin_tail(measure, x);
}

double jitter_off_atoms(const DiscreteMeasure& measure, double x) {
  const auto atoms = measure.atoms();
  while (std::binary_search(atoms.begin(), atoms.end(), x)) {
    x = std::nextafter(x, std::numeric_limits<double>::infinity());
  }
  return x;
}

double forward_density(const TrueModel& model, double z,
                       const QuadOptions& options) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw InvalidInput("forward density needs z > 0");
  }
  // Integrate over the survival level u = 1 - F0(x), so dF0 = -du and density
  // singularities of F0 disappear; the endpoint at x = z is then removed by
  // u = S(z) - t^m. m = 2 for a smooth density at z. On a Hoelder point the
  // gap x - z grows like (S(z) - u)^(1/gamma) and m = 2 gamma / (2 gamma - 1)
  // makes the integrand bounded again.
  const double top = model.survival(z);
  if (top <= 0.0) return 0.0;
  double m = 2.0;
  const auto* holder = std::get_if<HolderPeakFamily>(&model.family());
  const bool on_peak = holder && z == kHolderCenter;
  if (on_peak) m = 2.0 * holder->gamma / (2.0 * holder->gamma - 1.0);
  // Above the peak x - 5 = (t^m / K)^(1/gamma) exactly; going through u
  // would cancel in 1/2 - u.
  const double k = holder ? holder_constant(holder->gamma) : 0.0;
  const double inv_gamma = holder ? 1.0 / holder->gamma : 0.0;
  std::vector<double> breaks;
  const double t_end = std::pow(top, 1.0 / m);
  for (double s : model.singular_points()) {
    if (s > z) {
      const double t = std::pow(top - model.survival(s), 1.0 / m);
      if (t > 0.0 && t < t_end) breaks.push_back(t);
    }
  }
  auto integrand = [&model, z, top, m, on_peak, k, inv_gamma](double t) {
    if (!(t > 0.0)) return 0.0;
    const double tm1 = std::pow(t, m - 1.0);
    double x = 0.0;
    double gap = 0.0;
    if (on_peak) {
      gap = std::pow(tm1 * t / k, inv_gamma);
      x = z + gap;
    } else {
      x = model.survival_quantile(top - tm1 * t);
      gap = x - z;
    }
    if (!(gap > 0.0) || !std::isfinite(x)) return 0.0;
    return m * tm1 * 0.5 / std::sqrt(x * gap);
  };
  return integrate_adaptive(integrand, 0.0, t_end, options, breaks).value;
}

double forward_density_crosscheck(const TrueModel& model, double z,
                                  double abs_tol) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw InvalidInput("forward density needs z > 0");
  }
  const double end = model.support_end();
  if (!(end > z)) return 0.0;
  std::vector<double> cuts = {z};
  for (double s : model.singular_points()) {
    if (s > z && s < end) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  // Unbounded support: one finite tanh-sinh piece past the last cut, then
  // exp-sinh on the remaining half line.
  const double finite_end = std::isinf(end) ? cuts.back() + 1.0 : end;
  cuts.push_back(finite_end);

  boost::math::quadrature::tanh_sinh<double> tanh_sinh;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    // The two-argument form hands over the distance to the nearer endpoint,
    // so x - z stays exact next to the singular end.
    // On the peak family the density is evaluated from the exact offset to
    // the centre as well, or the (x - 5)^(gamma - 1) blow-up is lost below
    // machine resolution.
    const double b = cuts[i + 1];
    const auto* holder = std::get_if<HolderPeakFamily>(&model.family());
    auto f = [&model, holder, z, a, b](double x, double xc) {
      const double gap = (a == z && xc < 0.0) ? -xc : x - z;
      double dens = 0.0;
      if (holder && a == kHolderCenter && xc < 0.0) {
        dens = holder->gamma * holder_constant(holder->gamma) *
               std::pow(-xc, holder->gamma - 1.0);
      } else if (holder && b == kHolderCenter && xc > 0.0) {
        dens = holder->gamma * holder_constant(holder->gamma) *
               std::pow(xc, holder->gamma - 1.0);
      } else {
        dens = model.density(x);
      }
      if (!(gap > 0.0) || !std::isfinite(dens)) return 0.0;
      return dens / (2.0 * std::sqrt(x * gap));
    };
    total += tanh_sinh.integrate(f, a, b, abs_tol);
  }
  if (std::isinf(end)) {
    boost::math::quadrature::exp_sinh<double> exp_sinh;
    total += exp_sinh.integrate(
        [&model, z](double x) {
          return model.density(x) / (2.0 * std::sqrt(x * (x - z)));
        },
        finite_end, end, abs_tol);
  }
  return total;
}

double observable_cdf(const TrueModel& model, double z,
                      const QuadOptions& options) {
  if (!(z >= 0.0)) throw InvalidInput("observable cdf needs z >= 0");
  if (z == 0.0) return 0.0;
  const double top = model.survival(z);
  if (top <= 0.0) return 1.0;
  auto integrand = [&model, z](double u) {
    const double x = model.survival_quantile(u);
    if (!std::isfinite(x)) return 0.0;
    const double ratio = std::min(1.0, z / x);
    // 1 - sqrt(1 - r) = r / (1 + sqrt(1 - r))
    return ratio / (1.0 + std::sqrt(1.0 - ratio));
  };
  const double tail =
      integrate_sqrt_endpoints(integrand, 0.0, top, false, true, options)
          .value;
  return model.cdf(z) + tail;
}

double v0_oracle(const TrueModel& model, double x, const QuadOptions& options) {
  check_query(x);
  const double top = model.survival(x);
  if (top <= 0.0) return 0.0;
  auto integrand = [&model](double u) {
    const double s = model.survival_quantile(u);
    if (!std::isfinite(s) || !(s > 0.0)) return 0.0;
    return 1.0 / std::sqrt(s);
  };
  QuadOptions scaled = options;
  scaled.abs_tol = options.abs_tol / (0.5 * kPi);
  return 0.5 * kPi *
         integrate_sqrt_endpoints(integrand, 0.0, top, false, x == 0.0, scaled)
             .value;
}

double v0_double_integral(const TrueModel& model, double x,
                          const QuadOptions& options) {
  check_query(x);
  const double end = model.support_end();
  if (!(end > x)) return 0.0;
  QuadOptions inner = options;
  inner.abs_tol = options.abs_tol * 1e-2;
  QuadOptions outer = options;
  outer.abs_tol = options.abs_tol * 0.5;
  // z = x + t^2 turns (z - x)^{-1/2} dz into 2 dt.
  auto integrand = [&model, x, &inner, end](double t) {
    const double z = x + t * t;
    if (!(z > 0.0) || z >= end) return 0.0;
    return 2.0 * forward_density(model, z, inner);
  };
  std::vector<double> breaks;
  for (double s : model.singular_points()) {
    if (s > x && s < end) breaks.push_back(std::sqrt(s - x));
  }
  const double upper = std::isinf(end) ? end : std::sqrt(end - x);
  return integrate_adaptive(integrand, 0.0, upper, outer, breaks).value;
}

double v0_exponential(double rate, double x) {
  check_query(x);
  return 0.5 * kPi * std::sqrt(kPi * rate) * std::erfc(std::sqrt(rate * x));
}

TailSpec TailSpec::of(const TrueModel& model) {
  return TailSpec{model.support_end(), model.singular_points()};
}

double f0_from_v(const std::function<double(double)>& v_fn, double x,
                 const TailSpec& tail, const QuadOptions& options) {
  check_query(x);
  std::vector<double> cuts = {x};
  for (double b : tail.breakpoints) {
    if (b > x && b < tail.support_end) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  if (tail.support_end > x) cuts.push_back(tail.support_end);
  if (x == 0.0 && cuts.size() >= 2 && std::isinf(cuts[1])) {
    cuts.insert(cuts.begin() + 1, 1.0);
  }

  auto integrand = [&v_fn](double s) { return v_fn(s) / (2.0 * std::sqrt(s)); };
  QuadOptions piece = options;
  piece.abs_tol = options.abs_tol * (0.5 * kPi) /
                  static_cast<double>(std::max<std::size_t>(cuts.size(), 2));
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (std::isinf(hi)) {
      integral += integrate_adaptive(integrand, lo, hi, piece).value;
    } else {
      integral +=
          integrate_sqrt_endpoints(integrand, lo, hi, lo == 0.0, false, piece)
              .value;
    }
  }
  const double v_x = x < tail.support_end ? v_fn(x) : 0.0;
  return 1.0 - (2.0 / kPi) * std::sqrt(x) * v_x - (2.0 / kPi) * integral;
}

double fstar_from_v(const std::function<double(double)>& v_fn, double x) {
  check_query(x);
  const double v0 = v_fn(0.0);
  if (!(v0 > 0.0)) throw NumericDomainError("V(0) must be positive");
  return 1.0 - v_fn(x) / v0;
}

}  // namespace wicksell
