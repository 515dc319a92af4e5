#include "wicksell/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "wicksell/errors.hpp"

namespace wicksell {
namespace {

// 15-point Kronrod nodes on [-1, 1] (nonnegative half) and weights; the
// 7-point Gauss rule uses the odd-indexed nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template <typename F>
QuadResult adapt(const F& f, std::vector<double> cuts,
                 const QuadOptions& options) {
  std::priority_queue<Panel> panels;
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Panel p = kronrod15(f, cuts[i], cuts[i + 1]);
    evaluations += 15;
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  while (error > options.abs_tol && !panels.empty() &&
         panels.size() < options.max_intervals) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    panels.pop();
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Recompute the sums from scratch to shed accumulated cancellation.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  if (!std::isfinite(value) || error > options.abs_tol) {
    throw QuadratureFailure(error, options.abs_tol);
  }
  return {value, error, evaluations};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadOptions& options,
                              std::span<const double> breakpoints) {
  if (std::isnan(a) || std::isnan(b) || !(b >= a) || std::isinf(a)) {
    throw InvalidInput("integration bounds must satisfy finite a <= b");
  }
  if (a == b) return {0.0, 0.0, 0};

  if (std::isinf(b)) {
    // x = a + t / (1 - t), dx = dt / (1 - t)^2 on t in [0, 1).
    auto mapped = [&f, a](double t) {
      if (t >= 1.0) return 0.0;
      const double s = 1.0 - t;
      const double v = f(a + t / s);
      return v == 0.0 ? 0.0 : v / (s * s);
    };
    std::vector<double> cuts = {0.0};
    for (double x : breakpoints) {
      if (x > a && std::isfinite(x)) cuts.push_back((x - a) / (1.0 + x - a));
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    return adapt(mapped, std::move(cuts), options);
  }

  std::vector<double> cuts = {a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  return adapt(f, std::move(cuts), options);
}

QuadResult integrate_sqrt_endpoints(const std::function<double(double)>& f,
                                    double a, double b, bool sqrt_at_left,
                                    bool sqrt_at_right,
                                    const QuadOptions& options) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidInput("integration bounds must be finite with a <= b");
  }
  if (a == b) return {0.0, 0.0, 0};
  QuadOptions half_options = options;
  if (sqrt_at_left && sqrt_at_right) half_options.abs_tol *= 0.5;

  auto left_piece = [&](double lo, double hi) {
    // x = lo + t^2, dx = 2 t dt.
    auto g = [&f, lo](double t) { return 2.0 * t * f(lo + t * t); };
    return integrate_adaptive(g, 0.0, std::sqrt(hi - lo), half_options);
  };
  auto right_piece = [&](double lo, double hi) {
    // x = hi - t^2.
    auto g = [&f, hi](double t) { return 2.0 * t * f(hi - t * t); };
    return integrate_adaptive(g, 0.0, std::sqrt(hi - lo), half_options);
  };

  if (sqrt_at_left && sqrt_at_right) {
    const double mid = 0.5 * (a + b);
    const QuadResult l = left_piece(a, mid);
    const QuadResult r = right_piece(mid, b);
    return {l.value + r.value, l.error + r.error,
            l.evaluations + r.evaluations};
  }
  if (sqrt_at_left) return left_piece(a, b);
  if (sqrt_at_right) return right_piece(a, b);
  return integrate_adaptive(f, a, b, options);
}

}  // namespace wicksell
