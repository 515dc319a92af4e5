#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "wicksell/errors.hpp"
#include "wicksell/measures.hpp"
#include "wicksell/model.hpp"
#include "wicksell/rng.hpp"
#include "wicksell/synthetic.hpp"

namespace wicksell {
namespace {

double total(const DiscreteMeasure& m) {
  return std::accumulate(m.weights().begin(), m.weights().end(), 0.0);
}

void expect_valid(const DiscreteMeasure& m) {
  ASSERT_GT(m.size(), 0u);
  EXPECT_NEAR(total(m), 1.0, 1e-12);
  for (std::size_t i = 0; i < m.size(); ++i) {
    EXPECT_GE(m.atoms()[i], 0.0);
    EXPECT_GE(m.weights()[i], 0.0);
    if (i > 0) EXPECT_LT(m.atoms()[i - 1], m.atoms()[i]);
  }
}

TEST(EmpiricalMeasure, SinglePoint) {
  const std::vector<double> data{2.0};
  const DiscreteMeasure m = empirical_measure(data);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.atoms()[0], 2.0);
  EXPECT_EQ(m.weights()[0], 1.0);
}

TEST(EmpiricalMeasure, MergesDuplicates) {
  const std::vector<double> data{1.0, 3.0, 1.0};
  const DiscreteMeasure m = empirical_measure(data);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.atoms()[0], 1.0);
  EXPECT_EQ(m.atoms()[1], 3.0);
  EXPECT_NEAR(m.weights()[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.weights()[1], 1.0 / 3.0, 1e-15);
}

TEST(EmpiricalMeasure, UniformWeightsForDistinctSample) {
  const SampleSet s = sample_observables(TrueModel::exponential(1.2), 2000, 11);
  const DiscreteMeasure m = empirical_measure(s.z_values);
  ASSERT_EQ(m.size(), 2000u);
  for (double w : m.weights()) EXPECT_NEAR(w, 1.0 / 2000.0, 1e-16);
}

TEST(EmpiricalMeasure, RejectsBadInput) {
  EXPECT_THROW(empirical_measure(std::vector<double>{}), InvalidInput);
  EXPECT_THROW(empirical_measure(std::vector<double>{1.0, -0.5}), InvalidInput);
}

TEST(Canonicalize, Idempotent) {
  const DiscreteMeasure m({3.0, 1.0, 3.0, 2.0}, {0.1, 0.2, 0.3, 0.4});
  const DiscreteMeasure once = canonicalize(m);
  EXPECT_EQ(canonicalize(once), once);
  expect_valid(once);
  EXPECT_EQ(once.size(), 3u);
}

TEST(BayesianBootstrap, SingleAtomGetsAllWeight) {
  RandomStream rng = Seed(4).stream();
  const DiscreteMeasure m = draw_bayesian_bootstrap(std::vector<double>{5.0}, rng);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.atoms()[0], 5.0);
  EXPECT_EQ(m.weights()[0], 1.0);
}

TEST(BayesianBootstrap, DirichletMomentsMatch) {
  const std::vector<double> data{1, 2, 3, 4};
  RandomStream rng = Seed(99).stream();
  const int draws = 100000;
  std::vector<double> sum(4, 0.0), sum_sq(4, 0.0);
  for (int d = 0; d < draws; ++d) {
    const DiscreteMeasure m = draw_bayesian_bootstrap(data, rng);
    EXPECT_NEAR(total(m), 1.0, 1e-12);
    for (int k = 0; k < 4; ++k) {
      sum[k] += m.weights()[k];
      sum_sq[k] += m.weights()[k] * m.weights()[k];
    }
  }
  const double se = std::sqrt(0.0375 / draws);
  for (int k = 0; k < 4; ++k) {
    const double mean = sum[k] / draws;
    const double var = sum_sq[k] / draws - mean * mean;
    EXPECT_NEAR(mean, 0.25, 3.0 * se);
    EXPECT_NEAR(var, 0.0375, 0.05 * 0.0375);
  }
}

TEST(BayesianBootstrap, RejectsEmpty) {
  RandomStream rng = Seed(1).stream();
  EXPECT_THROW(draw_bayesian_bootstrap(std::vector<double>{}, rng), InvalidInput);
}

TEST(DPPosterior, MixingWeightHasBetaMean) {
  std::vector<double> data(2000);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = 0.001 * (i + 1);
  const DPPosterior post(BaseMeasureSpec(1.0, ExponentialBase{1.0}), data);
  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    RandomStream rng = Seed(5).child(d).stream();
    const DPDraw draw = draw_dp_posterior_parts(post, rng);
    sum += draw.mixing_weight;
    sum_sq += draw.mixing_weight * draw.mixing_weight;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sum_sq / draws - mean * mean);
  EXPECT_NEAR(mean, 1.0 / 2001.0, 3.0 * sd / std::sqrt(draws));
}

TEST(DPPosterior, StickCountMatchesLogResidual) {
  const BaseMeasureSpec prior(1.0, ExponentialBase{1.0});
  const int draws = 5000;
  double sticks = 0.0;
  for (int d = 0; d < draws; ++d) {
    RandomStream rng = Seed(6).child(d).stream();
    const StickBreakingDraw q = draw_stick_breaking(prior, rng, 1e-4);
    EXPECT_NEAR(total(q.measure), 1.0, 1e-12);
    sticks += static_cast<double>(q.sticks);
  }
  const double expected = 1.0 + std::log(1e4);
  EXPECT_NEAR(sticks / draws, expected, 0.2 * expected);
}

TEST(DPPosterior, VanishingPriorCollapsesToData) {
  const DPPosterior post(BaseMeasureSpec(1e-12, ExponentialBase{1.0}), {1.0});
  for (int d = 0; d < 100; ++d) {
    RandomStream rng = Seed(7).child(d).stream();
    const DiscreteMeasure m = draw_dp_posterior(post, rng);
    double off_data = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.atoms()[i] != 1.0) off_data += m.weights()[i];
    }
    EXPECT_LT(off_data, 1e-6);
  }
}

TEST(DPPosterior, DrawsAreValidAndDeterministic) {
  const std::vector<double> data{0.5, 1.0, 1.0, 2.5, 4.0};
  const DPPosterior post(BaseMeasureSpec::default_for(data), data);
  for (int d = 0; d < 50; ++d) {
    RandomStream a = Seed(8).child(d).stream();
    RandomStream b = Seed(8).child(d).stream();
    const DiscreteMeasure ma = draw_dp_posterior(post, a);
    expect_valid(ma);
    EXPECT_EQ(ma, draw_dp_posterior(post, b));
  }
}

TEST(DPPosterior, PriorMassMatchesBetaMean) {
  const std::vector<double> data{0.5, 1.0, 2.0, 3.0};
  const double mass = 2.0;
  const DPPosterior post(BaseMeasureSpec(mass, ExponentialBase{1.0}), data);
  const int draws = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    RandomStream rng = Seed(9).child(d).stream();
    const DiscreteMeasure m = draw_dp_posterior(post, rng, 1e-8);
    double off = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double z = m.atoms()[i];
      if (z != 0.5 && z != 1.0 && z != 2.0 && z != 3.0) off += m.weights()[i];
    }
    sum += off;
    sum_sq += off * off;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt(sum_sq / draws - mean * mean);
  EXPECT_NEAR(mean, mass / (mass + 4.0), 4.0 * sd / std::sqrt(draws));
}

TEST(DPPosterior, RejectsBadTruncation) {
  const DPPosterior post(BaseMeasureSpec(1.0, ExponentialBase{1.0}), {1.0});
  RandomStream rng = Seed(1).stream();
  EXPECT_THROW(draw_dp_posterior(post, rng, 0.0), InvalidInput);
  EXPECT_THROW(draw_dp_posterior(post, rng, 1.0), InvalidInput);
}

TEST(BaseMeasure, DefaultUsesMeanRate) {
  const std::vector<double> data{1.0, 3.0};
  const BaseMeasureSpec spec = BaseMeasureSpec::default_for(data);
  EXPECT_EQ(spec.total_mass(), 1.0);
  EXPECT_DOUBLE_EQ(std::get<ExponentialBase>(spec.family()).rate, 0.5);
  EXPECT_EQ(spec.describe(), "1*exp:0.5");
}

TEST(BaseMeasure, ParseForms) {
  const std::vector<double> data{2.0};
  EXPECT_EQ(BaseMeasureSpec::parse("default", data).describe(), "1*exp:0.5");
  EXPECT_EQ(BaseMeasureSpec::parse("3*exp:2", data).describe(), "3*exp:2");
  const BaseMeasureSpec u = BaseMeasureSpec::parse("0.5*uniform:4", data);
  EXPECT_EQ(u.total_mass(), 0.5);
  EXPECT_EQ(std::get<UniformBase>(u.family()).upper, 4.0);
  EXPECT_THROW(BaseMeasureSpec::parse("-1*exp:2", data), InvalidInput);
  EXPECT_THROW(BaseMeasureSpec::parse("gamma:2", data), InvalidInput);
}

TEST(BaseMeasure, RejectsNonpositiveMass) {
  EXPECT_THROW(BaseMeasureSpec(0.0, ExponentialBase{1.0}), InvalidInput);
}

TEST(Integrate, Examples) {
  EXPECT_DOUBLE_EQ(
      integrate(DiscreteMeasure::point_mass(4.0), [](double z) { return std::sqrt(z); }),
      2.0);
  EXPECT_DOUBLE_EQ(integrate(DiscreteMeasure({1.0, 3.0}, {0.5, 0.5}),
                             [](double z) { return z; }),
                   2.0);
  EXPECT_NEAR(integrate(empirical_measure(std::vector<double>{1, 2, 3}),
                        [](double z) { return z * z; }),
              14.0 / 3.0, 1e-14);
}

TEST(Integrate, NonFiniteNamesAtom) {
  try {
    integrate(DiscreteMeasure({0.0, 1.0}, {0.5, 0.5}),
              [](double z) { return 1.0 / z; });
    FAIL() << "expected NumericDomainError";
  } catch (const NumericDomainError& e) {
    EXPECT_NE(std::string(e.what()).find('0'), std::string::npos);
  }
}

}  // namespace
}  // namespace wicksell
