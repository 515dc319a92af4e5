#include "wicksell/isotonize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wicksell/errors.hpp"
#include "wicksell/transform.hpp"

namespace wicksell {

StepFn::StepFn(std::vector<double> breakpoints, std::vector<double> values,
               double terminal)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      terminal_(terminal) {
  if (breakpoints_.empty()) throw InvalidInput("step function needs a start");
  if (values_.size() + 1 != breakpoints_.size()) {
    throw InvalidInput("step function needs one value per segment");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw InvalidInput("step breakpoints must increase");
    }
  }
}

double StepFn::operator()(double x) const {
  if (x < breakpoints_.front() || std::isnan(x)) {
    throw InvalidInput("step function evaluated left of its domain");
  }
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  const auto k = static_cast<std::size_t>(it - breakpoints_.begin());
  return k >= breakpoints_.size() ? terminal_ : values_[k - 1];
}

bool StepFn::nonincreasing() const {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] > values_[i - 1]) return false;
  }
  return values_.empty() || terminal_ <= values_.back();
}

ConcaveMajorantFn::ConcaveMajorantFn(std::vector<Point> vertices,
                                     std::vector<double> slopes)
    : vertices_(std::move(vertices)), slopes_(std::move(slopes)) {
  if (vertices_.empty() || slopes_.size() + 1 != vertices_.size()) {
    throw InvalidInput("majorant needs one slope per segment");
  }
}

double ConcaveMajorantFn::operator()(double x) const {
  if (x <= vertices_.front().x) return vertices_.front().y;
  if (x >= vertices_.back().x) return vertices_.back().y;
  const auto it = std::upper_bound(
      vertices_.begin(), vertices_.end(), x,
      [](double value, const Point& p) { return value < p.x; });
  const auto k = static_cast<std::size_t>(it - vertices_.begin()) - 1;
  return vertices_[k].y + slopes_[k] * (x - vertices_[k].x);
}

StepFn ConcaveMajorantFn::right_derivative() const {
  std::vector<double> breaks;
  breaks.reserve(vertices_.size());
  for (const Point& p : vertices_) breaks.push_back(p.x);
  return StepFn(std::move(breaks), slopes_, 0.0);
}

ConcaveMajorantFn lcm_from_points(std::span<const Point> points) {
  if (points.empty()) throw InvalidInput("no points to hull");
  if (points.front().x != 0.0 || points.front().y != 0.0) {
    throw InvalidInput("hull must start at (0, 0)");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
      throw InvalidInput("hull points must be finite");
    }
    if (i > 0 && !(points[i].x > points[i - 1].x)) {
      throw InvalidInput("hull x-coordinates must strictly increase");
    }
  }

  std::vector<Point> hull;
  hull.reserve(points.size());
  for (const Point& p : points) {
    // Pop the last vertex while it lies on or below the chord from its
    // predecessor to p.
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const double cross =
          (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }

  std::vector<double> slopes;
  slopes.reserve(hull.size());
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    slopes.push_back((hull[i + 1].y - hull[i].y) / (hull[i + 1].x - hull[i].x));
  }
  return ConcaveMajorantFn(std::move(hull), std::move(slopes));
}

std::vector<Point> u_points(const DiscreteMeasure& measure) {
  const auto atoms = measure.atoms();
  const std::vector<double> u = u_at_atoms(measure);
  std::vector<Point> points;
  points.reserve(atoms.size() + 1);
  points.push_back({0.0, 0.0});
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i] > 0.0) points.push_back({atoms[i], u[i]});
  }
  return points;
}

StepFn isotonize_measure(const DiscreteMeasure& measure) {
  const std::vector<Point> points = u_points(measure);
  if (points.size() == 1) {
    // All mass at 0: V vanishes on (0, inf).
    return StepFn({0.0}, {}, 0.0);
  }
  return lcm_from_points(points).right_derivative();
}

std::vector<double> pava_decreasing(std::span<const double> values,
                                    std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw InvalidInput("values and weights differ in length");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidInput("PAVA weights must be positive");
  }
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    // Nonincreasing target: a block may not exceed its left neighbour.
    while (blocks.size() >= 2 &&
           blocks.back().mean > blocks[blocks.size() - 2].mean) {
      const Block right = blocks.back();
      blocks.pop_back();
      Block& left = blocks.back();
      const double total = left.weight + right.weight;
      left.mean = (left.mean * left.weight + right.mean * right.weight) / total;
      left.weight = total;
      left.count += right.count;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const Block& b : blocks) fitted.insert(fitted.end(), b.count, b.mean);
  return fitted;
}

double switch_argmax(std::span<const Point> points, double a) {
  if (points.empty()) throw InvalidInput("no evaluation points");
  if (!(a >= 0.0)) throw InvalidInput("switch relation needs a >= 0");
  double best = points.front().y - a * points.front().x;
  double where = points.front().x;
  for (const Point& p : points.subspan(1)) {
    const double value = p.y - a * p.x;
    if (value > best) {
      best = value;
      where = p.x;
    }
  }
  return where;
}

double f_hat(const StepFn& vhat, double x) {
  if (!(x >= 0.0)) throw InvalidInput("f_hat needs x >= 0");
  const auto breaks = vhat.breakpoints();
  const auto values = vhat.values();
  // int_x^inf V(s) / (2 sqrt s) ds = sum_k v_k (sqrt(b_{k+1}) - sqrt(max(b_k,
  // x))) over segments ending above x; the terminal value must be 0 for the
  // tail to be finite.
  if (vhat.terminal() != 0.0) {
    throw InvalidInput("f_hat needs V to vanish after its last breakpoint");
  }
  double tail = 0.0;
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  std::size_t k = static_cast<std::size_t>(it - breaks.begin());
  k = k == 0 ? 0 : k - 1;
  for (; k < values.size(); ++k) {
    const double lo = std::max(breaks[k], x);
    const double hi = breaks[k + 1];
    if (hi <= x) continue;
    // sqrt(hi) - sqrt(lo) without cancellation.
    tail += values[k] * (hi - lo) / (std::sqrt(hi) + std::sqrt(lo));
  }
  const double v = x < breaks.front() ? (values.empty() ? 0.0 : values[0])
                                      : vhat(x);
  return 1.0 - (2.0 / std::numbers::pi) * (std::sqrt(x) * v + tail);
}

}  // namespace wicksell
