#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wicksell/errors.hpp"
#include "wicksell/isotonize.hpp"
#include "wicksell/measures.hpp"
#include "wicksell/rng.hpp"
#include "wicksell/transform.hpp"
#include "wicksell/verify.hpp"

namespace wicksell {
namespace {

using std::numbers::pi;

std::vector<Point> pts(std::initializer_list<Point> list) { return list; }

TEST(Lcm, DropsPointBelowChord) {
  const auto p = pts({{0, 0}, {1, 2}, {2, 2.5}, {3, 4}});
  const ConcaveMajorantFn h = lcm_from_points(p);
  ASSERT_EQ(h.vertices().size(), 3u);
  EXPECT_EQ(h.vertices()[1].x, 1.0);
  EXPECT_EQ(h.vertices()[2].x, 3.0);
  ASSERT_EQ(h.slopes().size(), 2u);
  EXPECT_DOUBLE_EQ(h.slopes()[0], 2.0);
  EXPECT_DOUBLE_EQ(h.slopes()[1], 1.0);
}

TEST(Lcm, MatchesGridHullOnExample) {
  const auto p = pts({{0, 0}, {1, 2}, {2, 2.5}, {3, 4}});
  const ConcaveMajorantFn h = lcm_from_points(p);
  // piecewise-linear interpolant sampled at 1e4 points, hulled by brute force
  const int grid = 12000;  // contains the vertex x = 1 exactly
  std::vector<double> xs(grid + 1), ys(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    xs[i] = 3.0 * i / grid;
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(xs[i]), 2);
    const double t = xs[i] - k;
    ys[i] = p[k].y + t * (p[k + 1].y - p[k].y);
  }
  const std::vector<std::size_t> hull = gift_wrap_hull(xs, ys);
  for (std::size_t j = 0; j + 1 < hull.size(); ++j) {
    const std::size_t a = hull[j], b = hull[j + 1];
    const double slope = (ys[b] - ys[a]) / (xs[b] - xs[a]);
    const double mid = 0.5 * (xs[a] + xs[b]);
    EXPECT_NEAR(h.right_derivative()(mid), slope, 1e-9);
  }
}

TEST(Lcm, ConcaveInputUnchanged) {
  const auto p = pts({{0, 0}, {1, 1}, {2, 1.5}});
  const ConcaveMajorantFn h = lcm_from_points(p);
  ASSERT_EQ(h.vertices().size(), 3u);
  EXPECT_DOUBLE_EQ(h.slopes()[0], 1.0);
  EXPECT_DOUBLE_EQ(h.slopes()[1], 0.5);
}

TEST(Lcm, TwoPoints) {
  const ConcaveMajorantFn h = lcm_from_points(pts({{0, 0}, {5, 3}}));
  ASSERT_EQ(h.slopes().size(), 1u);
  EXPECT_DOUBLE_EQ(h.slopes()[0], 0.6);
  EXPECT_DOUBLE_EQ(h(2.5), 1.5);
  EXPECT_DOUBLE_EQ(h(9.0), 3.0);
}

TEST(Lcm, RejectsBadInput) {
  EXPECT_THROW(lcm_from_points(pts({{0, 0}, {2, 1}, {1, 2}})), InvalidInput);
  EXPECT_THROW(lcm_from_points(pts({{0, 0}, {1, 1}, {1, 2}})), InvalidInput);
  EXPECT_THROW(lcm_from_points(pts({{1, 0}, {2, 1}})), InvalidInput);
}

TEST(Isotonize, PointMass) {
  const StepFn v = isotonize_measure(DiscreteMeasure::point_mass(1.0));
  EXPECT_DOUBLE_EQ(v(0.0), 2.0);
  EXPECT_DOUBLE_EQ(v(0.999), 2.0);
  EXPECT_EQ(v(1.0), 0.0);
  EXPECT_EQ(v(50.0), 0.0);
}

TEST(Isotonize, ConcaveCaseGivesSecants) {
  // U at atoms 1, 4 for equal weights: concave polyline, so slopes are secants.
  const DiscreteMeasure m({1.0, 4.0}, {0.5, 0.5});
  const std::vector<Point> p = u_points(m);
  ASSERT_EQ(p.size(), 3u);
  const StepFn v = isotonize_measure(m);
  const double s0 = p[1].y / p[1].x;
  const double s1 = (p[2].y - p[1].y) / (p[2].x - p[1].x);
  ASSERT_GT(s0, s1);
  EXPECT_DOUBLE_EQ(v(0.5), s0);
  EXPECT_DOUBLE_EQ(v(2.0), s1);
}

TEST(Isotonize, HullDominatesFullU) {
  RandomStream rng = Seed(31).stream();
  for (int t = 0; t < 20; ++t) {
    const DiscreteMeasure m = random_measure(rng, 50);
    const ConcaveMajorantFn h = lcm_from_points(u_points(m));
    for (int k = 0; k < 10000; ++k) {
      const double x = rng.uniform() * m.max_atom() * 1.1;
      ASSERT_GE(h(x), u_of(m, x) - 1e-12);
    }
    const StepFn v = h.right_derivative();
    EXPECT_TRUE(v.nonincreasing());
    for (double s : v.values()) EXPECT_GE(s, 0.0);
    EXPECT_EQ(v(m.max_atom()), 0.0);
  }
}

TEST(Isotonize, Idempotent) {
  // Re-hulling the integral of an already isotonic V leaves it fixed.
  RandomStream rng = Seed(32).stream();
  for (int t = 0; t < 20; ++t) {
    const DiscreteMeasure m = random_measure(rng, 60);
    const StepFn v = isotonize_measure(m);
    std::vector<Point> p{{0.0, 0.0}};
    const auto b = v.breakpoints();
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      p.push_back({b[k + 1], p.back().y + v.values()[k] * (b[k + 1] - b[k])});
    }
    const StepFn again = lcm_from_points(p).right_derivative();
    for (int k = 0; k < 200; ++k) {
      const double x = rng.uniform() * m.max_atom();
      EXPECT_NEAR(again(x), v(x), 1e-9 * std::max(1.0, v(x)));
    }
  }
}

TEST(Pava, Examples) {
  const std::vector<double> ones{1, 1, 1};
  const auto r = pava_decreasing(std::vector<double>{1, 3, 2}, ones);
  for (double y : r) EXPECT_DOUBLE_EQ(y, 2.0);
  const auto same = pava_decreasing(std::vector<double>{3, 2, 1}, ones);
  EXPECT_EQ(same, (std::vector<double>{3, 2, 1}));
  const auto pooled =
      pava_decreasing(std::vector<double>{0, 5}, std::vector<double>{1, 1});
  EXPECT_EQ(pooled, (std::vector<double>{2.5, 2.5}));
}

TEST(Pava, MatchesBruteForceQuadraticProgram) {
  // Over a fine grid of nonincreasing triples, no candidate beats PAVA.
  const std::vector<double> y{1, 3, 2}, w{1, 1, 1};
  const auto fit = pava_decreasing(y, w);
  auto loss = [&](double a, double b, double c) {
    return (a - 1) * (a - 1) + (b - 3) * (b - 3) + (c - 2) * (c - 2);
  };
  const double best = loss(fit[0], fit[1], fit[2]);
  for (double a = 0; a <= 4; a += 0.05) {
    for (double b = 0; b <= a; b += 0.05) {
      for (double c = 0; c <= b; c += 0.05) {
        ASSERT_GE(loss(a, b, c), best - 1e-12);
      }
    }
  }
}

TEST(Pava, WeightedPool) {
  const auto r =
      pava_decreasing(std::vector<double>{1, 4}, std::vector<double>{3, 1});
  EXPECT_DOUBLE_EQ(r[0], 1.75);
  EXPECT_DOUBLE_EQ(r[1], 1.75);
}

TEST(Pava, RejectsBadInput) {
  EXPECT_THROW(pava_decreasing(std::vector<double>{1, 2}, std::vector<double>{1}),
               InvalidInput);
  EXPECT_THROW(
      pava_decreasing(std::vector<double>{1, 2}, std::vector<double>{1, 0}),
      InvalidInput);
}

TEST(Switch, PointMassExamples) {
  const std::vector<Point> p = u_points(DiscreteMeasure::point_mass(1.0));
  EXPECT_EQ(switch_argmax(p, 3.0), 0.0);
  EXPECT_EQ(switch_argmax(p, 1.0), 1.0);
  // at a = 2 the whole segment is maximal; the smallest maximizer is 0
  EXPECT_EQ(switch_argmax(p, 2.0), 0.0);
}

TEST(Switch, RelationHoldsOnRandomPairs) {
  RandomStream rng = Seed(33).stream();
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const DiscreteMeasure m = random_measure(rng, 80);
    const std::vector<Point> p = u_points(m);
    const StepFn v = lcm_from_points(p).right_derivative();
    const double top = v(0.0);
    for (int k = 0; k < 10; ++k) {
      const double a = rng.uniform() * 1.2 * top;
      const double x = rng.uniform() * 1.1 * m.max_atom();
      if ((switch_argmax(p, a) <= x) != (v(x) <= a)) ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(FHat, Examples) {
  const StepFn zero({0.0}, {}, 0.0);
  EXPECT_EQ(f_hat(zero, 0.0), 1.0);
  EXPECT_EQ(f_hat(zero, 3.0), 1.0);
  const StepFn two({0.0, 1.0}, {2.0}, 0.0);
  EXPECT_NEAR(f_hat(two, 0.0), 1.0 - 4.0 / pi, 1e-15);
  EXPECT_NEAR(f_hat(two, 0.0), -0.2732, 1e-4);
  EXPECT_EQ(f_hat(two, 1.0), 1.0);
  EXPECT_EQ(f_hat(two, 5.0), 1.0);
}

TEST(FHat, MatchesNaiveFormWhenVIsExact) {
  // For a step V, f_hat equals 1 - (2/pi)(sqrt(x)V(x) + int_x V/(2 sqrt s)).
  const StepFn v({0.0, 1.0, 3.0}, {2.0, 0.5}, 0.0);
  const double x = 2.0;
  const double tail = 0.5 * (std::sqrt(3.0) - std::sqrt(2.0));
  EXPECT_NEAR(f_hat(v, x), 1 - 2 / pi * (std::sqrt(2.0) * 0.5 + tail), 1e-15);
}

TEST(FHat, NondecreasingForIsotonicV) {
  RandomStream rng = Seed(34).stream();
  for (int t = 0; t < 20; ++t) {
    const DiscreteMeasure m = random_measure(rng, 100);
    const StepFn v = isotonize_measure(m);
    double prev = f_hat(v, 0.0);
    for (int k = 1; k <= 500; ++k) {
      const double f = f_hat(v, m.max_atom() * 1.05 * k / 500);
      EXPECT_GE(f, prev - 1e-13);
      prev = f;
    }
  }
}

TEST(StepFnTest, RejectsOutOfDomain) {
  const StepFn v({0.0, 1.0}, {2.0}, 0.0);
  EXPECT_THROW(v(-0.1), InvalidInput);
  EXPECT_THROW(v(std::nan("")), InvalidInput);
}

}  // namespace
}  // namespace wicksell
