#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "polaron/kernels.hpp"

using namespace polaron;

namespace {

ModelParams params(double gamma, int d, double eps) { return ModelParams{1.0, gamma, d, eps, 10.0}; }

// c(gamma, d) = 2^{-gamma/2} Gamma((d - gamma)/2) / Gamma(d/2): the Beta
// integral of the mark density against (1 + u^2)^{-d/2}.
double c_closed(double gamma, int d) {
  return std::pow(2.0, -gamma / 2.0) * std::tgamma((d - gamma) / 2.0) / std::tgamma(d / 2.0);
}

using Ivs = std::vector<Interval>;

}  // namespace

TEST(MarkDensity, ValuesAndMonotonicity) {
  EXPECT_NEAR(mark_density(1.0, 1.0), std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_EQ(mark_density(0.0, 1.5), 0.0);
  for (double gamma : {1.0, 1.5}) {
    double prev = 0.0;
    for (double u = 0.01; u < 50.0; u *= 1.3) {
      EXPECT_GE(mark_density(u, gamma), prev);
      prev = mark_density(u, gamma);
    }
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double sum_w = 0.0, m14 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum_w += w[i];
    m14 += w[i] * std::pow(x[i], 14);
  }
  EXPECT_NEAR(sum_w, 2.0, 1e-14);
  EXPECT_NEAR(m14, 2.0 / 15.0, 1e-14);
  EXPECT_THROW(gauss_legendre(0, x, w), std::invalid_argument);
}

TEST(ExpectedPotential, Examples) {
  EXPECT_NEAR(expected_potential(1.0, params(1, 3, 0)), std::sqrt(2.0 / std::numbers::pi), 1e-12);
  EXPECT_NEAR(expected_potential(1.0, params(1, 3, 0)), 0.797885, 1e-6);
  EXPECT_NEAR(expected_potential(2.0, params(1, 3, 0)), 1.0 / std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(expected_potential(2.0, params(1, 3, 0)), 0.564190, 1e-6);
  for (double t : {0.3, 2.0, 7.0}) {
    EXPECT_NEAR(expected_potential(t, params(1.5, 2, 1)), expected_potential(t, params(1.5, 2, 0)) + 1.0, 1e-12);
  }
  EXPECT_THROW(expected_potential(0.0, params(1, 3, 0)), std::invalid_argument);
}

TEST(ExpectedPotential, MatchesBetaClosedForm) {
  for (double gamma : {1.0, 1.25, 1.5, 1.9}) {
    for (int d : {2, 3, 4}) {
      EXPECT_NEAR(potential_constant(gamma, d) / c_closed(gamma, d), 1.0, 1e-8) << gamma << " " << d;
    }
  }
  EXPECT_NEAR(c_closed(1.0, 2), 1.2533141373, 1e-10);
}

TEST(ExpectedPotential, ScalingIdentity) {
  for (double gamma : {1.0, 1.5}) {
    for (int d : {2, 3}) {
      const auto p = params(gamma, d, 0);
      const double ref = expected_potential(1.0, p);
      for (double t : {0.5, 2.0, 4.0}) {
        EXPECT_NEAR(expected_potential(t, p) * std::pow(t, gamma / 2.0) / ref, 1.0, 1e-8);
      }
    }
  }
}

TEST(MarkProbability, Examples) {
  EXPECT_NEAR(mark_probability(1.0, params(1, 3, 0)), std::pow(2.0, -0.5) / std::pow(5.0, 1.5), 1e-15);
  EXPECT_NEAR(mark_probability(1.0, params(1, 3, 0)), 0.063246, 1e-6);
  const double shifted = mark_probability(1.0, params(1, 3, 1));
  EXPECT_NEAR(shifted, 0.0632455532 * (1.0 - 1.0 / (1.0 / std::sqrt(std::numbers::pi) + 1.0)), 1e-10);
  EXPECT_NEAR(shifted, 0.0228121212, 1e-9);
  EXPECT_THROW(mark_probability(0.0, params(1, 3, 0)), std::invalid_argument);
  for (double C : {0.1, 1.0, 10.0}) {
    const double p = mark_probability(C, params(1.5, 2, 1));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(MarkProbability, LargeAlphaExample) {
  const double C = std::pow(1e6, 0.2);
  EXPECT_NEAR(mark_probability(C, params(1, 3, 1)), 7.99618e-6, 1e-10);
}

TEST(ConfigurationWeight, Examples) {
  const auto p = params(1, 3, 0);
  EXPECT_EQ(configuration_weight(Ivs{}, p), 1.0);
  EXPECT_NEAR(configuration_weight(Ivs{{0, 1}}, p), std::sqrt(2.0 / std::numbers::pi), 1e-6);
  EXPECT_NEAR(configuration_weight(Ivs{{0, 1}, {2, 3}}, p), 2.0 / std::numbers::pi, 1e-6);
  EXPECT_NEAR(2.0 / std::numbers::pi, 0.636620, 1e-6);
  EXPECT_THROW(configuration_weight(Ivs{{0, 1}, {1, 2}, {2, 3}, {3, 4}}, p), std::invalid_argument);
}

TEST(ConfigurationWeight, DisjointFactorizesWithAtom) {
  for (double eps : {0.0, 1.0}) {
    const auto p = params(1.5, 3, eps);
    const Ivs xi{{0, 0.5}, {1, 2.5}, {3, 5}};
    const double product = expected_potential(0.5, p) * expected_potential(1.5, p) * expected_potential(2.0, p);
    EXPECT_NEAR(configuration_weight(xi, p) / product, 1.0, 1e-6);
  }
}

TEST(ConfigurationWeight, OverlapIncreasesWeight) {
  // Overlapping windows are positively correlated; the repulsive weight prod 1/|X|
  // favours them (Gaussian correlation inequality), so F exceeds the product.
  const auto p = params(1, 3, 0);
  EXPECT_GT(configuration_weight(Ivs{{0, 1}, {0.2, 1.2}}, p), configuration_weight(Ivs{{0, 1}, {2, 3}}, p));
}

TEST(ConditionalMark, SingleIntervalClosedForm) {
  const std::vector<MarkPattern> free{MarkPattern::Free};
  const double v = conditional_mark_probability(Ivs{{0, 2}}, 0, free, 1.0, params(1, 3, 0));
  EXPECT_NEAR(v, 1.0 - std::sqrt(2.0 / 3.0), 1e-7);
  EXPECT_NEAR(v, 0.18357, 1e-4);
  EXPECT_GE(v, mark_probability(1.0, params(1, 3, 0)));
}

TEST(ConditionalMark, SmallThresholdGivesOne) {
  const std::vector<MarkPattern> free{MarkPattern::Free};
  EXPECT_NEAR(conditional_mark_probability(Ivs{{0, 1}}, 0, free, 1e-9, params(1, 3, 0)), 1.0, 1e-8);
}

TEST(ConditionalMark, TwoOverlappingDominates) {
  const Ivs xi{{0, 1.5}, {0.5, 2.0}};
  const std::vector<MarkPattern> above{MarkPattern::Free, MarkPattern::Above};
  for (double eps : {0.0, 1.0}) {
    const auto p = params(1, 3, eps);
    EXPECT_GE(conditional_mark_probability(xi, 0, above, 1.0, p), mark_probability(1.0, p) - 1e-8);
  }
}

TEST(ConditionalMark, DisjointIgnoresOtherPattern) {
  const Ivs xi{{0, 1}, {2, 3}};
  const auto p = params(1, 3, 0);
  const std::vector<MarkPattern> a{MarkPattern::Free, MarkPattern::Above};
  const std::vector<MarkPattern> b{MarkPattern::Free, MarkPattern::Below};
  const std::vector<MarkPattern> one{MarkPattern::Free};
  const double single = conditional_mark_probability(Ivs{{0, 1}}, 0, one, 1.0, p);
  EXPECT_NEAR(conditional_mark_probability(xi, 0, a, 1.0, p), single, 1e-7);
  EXPECT_NEAR(conditional_mark_probability(xi, 0, b, 1.0, p), single, 1e-7);
}

TEST(ConditionalMark, Errors) {
  const auto p = params(1, 3, 0);
  const std::vector<MarkPattern> one{MarkPattern::Free};
  EXPECT_THROW(conditional_mark_probability(Ivs{{0, 3}}, 0, one, 1.0, p), std::invalid_argument);
  EXPECT_THROW(conditional_mark_probability(Ivs{{0, 1}}, 1, one, 1.0, p), std::invalid_argument);
  const std::vector<MarkPattern> four(4, MarkPattern::Free);
  EXPECT_THROW(conditional_mark_probability(Ivs{{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 0, four, 1.0, p),
               std::invalid_argument);
}
