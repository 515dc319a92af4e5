#ifndef WICKSELL_ISOTONIZE_HPP_
#define WICKSELL_ISOTONIZE_HPP_

#include <span>
#include <vector>

#include "wicksell/measures.hpp"

namespace wicksell {

struct Point {
  double x;
  double y;
};

// Right-continuous step function: values[k] on [breakpoints[k],
// breakpoints[k+1]), terminal value from the last breakpoint on.
class StepFn {
 public:
  StepFn(std::vector<double> breakpoints, std::vector<double> values,
         double terminal);

  double operator()(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  double terminal() const { return terminal_; }
  bool nonincreasing() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double terminal_;
};

// Piecewise-linear concave function through the hull vertices, constant after
// the last vertex.
class ConcaveMajorantFn {
 public:
  ConcaveMajorantFn(std::vector<Point> vertices, std::vector<double> slopes);

  double operator()(double x) const;
  // Right derivative: slope of the segment starting at or containing x, 0
  // past the last vertex.
  StepFn right_derivative() const;

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const double> slopes() const { return slopes_; }

 private:
  std::vector<Point> vertices_;
  std::vector<double> slopes_;
};

// Least concave majorant of a finite point set starting at (0, 0): the upper
// hull by monotone chain. Collinear interior points are dropped.
ConcaveMajorantFn lcm_from_points(std::span<const Point> points);

// (0, 0) followed by (z, U_G(z)) for every positive atom z. Since U_G is
// convex between consecutive atoms, the hull of this set is the least
// concave majorant of U_G on all of [0, inf).
std::vector<Point> u_points(const DiscreteMeasure& measure);

// The isotonized V: right derivative of the least concave majorant of U_G.
StepFn isotonize_measure(const DiscreteMeasure& measure);

// Weighted least-squares projection onto nonincreasing sequences.
std::vector<double> pava_decreasing(std::span<const double> values,
                                    std::span<const double> weights);

// T(a) = smallest maximizer of U(t) - a t over the evaluation points; a >= 0.
double switch_argmax(std::span<const Point> points, double a);

// 1 - (2/pi) sqrt(x) V(x) - (2/pi) int_x^inf V(s) / (2 sqrt s) ds for a
// nonincreasing step function V, with the tail integral in closed form.
double f_hat(const StepFn& vhat, double x);

}  // namespace wicksell

#endif  // WICKSELL_ISOTONIZE_HPP_
