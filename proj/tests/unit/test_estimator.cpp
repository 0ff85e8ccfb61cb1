#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "polaron/estimator.hpp"
#include "polaron/kernels.hpp"

using namespace polaron;

namespace {

ModelParams params(double alpha, double eps = 1.0, int d = 3, double T = 10.0) {
  return ModelParams{alpha, 1.0, d, eps, T};
}

const MemoryDensity kExp = MemoryDensity::exponential();

}  // namespace

TEST(AnalyticBound, LargeAlphaExample) {
  const double C = optimal_mark(params(1e6));
  EXPECT_NEAR(C, 15.848931924611133, 1e-12);
  const double p = mark_probability(C, params(1e6));
  EXPECT_NEAR(1e6 * p * kExp.partial_moment(1.0, 2.0), 2.636765, 1e-5);
  EXPECT_NEAR(analytic_upper_bound(params(1e6), kExp, C), 0.2789349, 1e-6);
  EXPECT_NEAR(analytic_upper_bound(params(1e6), kExp, C), 0.2790, 1e-4);
}

TEST(AnalyticBound, Limits) {
  const double C = 1.7;
  EXPECT_NEAR(analytic_upper_bound(params(1e-12), kExp, C), 1.0 + 1.0 / (C * C + 1.0), 1e-12);
  EXPECT_NEAR(analytic_upper_bound(params(1e3), kExp, 1e6), 1.0, 1e-9);
  EXPECT_NEAR(analytic_upper_bound(params(1e14), kExp, C), 1.0 / (C * C + 1.0), 1e-9);
}

TEST(AnalyticBound, DecreasingInAlpha) {
  double prev = std::numeric_limits<double>::infinity();
  for (double a = 1e-3; a < 1e12; a *= 7.0) {
    const double b = analytic_upper_bound(params(a), kExp, 2.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(AnalyticBound, Errors) {
  EXPECT_THROW(analytic_upper_bound(params(1.0, 0.0), kExp, 1.0), std::invalid_argument);
  EXPECT_THROW(analytic_upper_bound(params(1.0), kExp, 0.0), std::invalid_argument);
}

TEST(OptimalMark, Examples) {
  EXPECT_EQ(optimal_mark(params(1.0)), 1.0);
  EXPECT_NEAR(optimal_mark(params(1e5)), 10.0, 1e-12);
  EXPECT_NEAR(optimal_mark(params(32.0, 1.0, 2)), 2.3784142, 1e-7);
}

TEST(RenewalPrediction, MatchesBoundFirstTerm) {
  const auto p = params(500.0);
  const auto r = renewal_prediction(p, kExp, 2.0);
  const double covered = p.alpha * p.epsilon * mark_probability(2.0, p) * kExp.partial_moment(1.0, 2.0);
  EXPECT_NEAR(r.dormant_fraction, 1.0 / (1.0 + covered), 1e-14);
  EXPECT_NEAR(r.mean_length, kExp.partial_moment(1.0, 2.0) / kExp.mass(1.0, 2.0), 1e-14);
  EXPECT_NEAR(r.cycle_rate, 1.0 / (1.0 / r.beta + r.mean_length), 1e-14);
}

TEST(UpperBoundMc, NearlyEmptyProcessGivesOne) {
  UpperBoundOptions o;
  o.replicates = 20;
  const auto r = upper_bound_mc(params(1.0, 1e-12, 3, 5.0), kExp, 1.0, o);
  EXPECT_EQ(r.sigma2.value, 1.0);
  EXPECT_EQ(r.sigma2.std_error, 0.0);
  EXPECT_EQ(r.dormant_fraction.value, 1.0);
}

TEST(UpperBoundMc, BelowBoundAndAboveFullConfig) {
  for (double alpha : {100.0, 1000.0}) {
    for (double C : {1.0, 2.0, 3.0}) {
      UpperBoundOptions o;
      o.replicates = 50;
      o.full_config = true;
      o.seed = 99;
      const auto p = params(alpha, 1.0, 3, 400.0);
      const auto r = upper_bound_mc(p, kExp, C, o);
      EXPECT_LE(r.sigma2.value, analytic_upper_bound(p, kExp, C) + 3.0 * r.sigma2.std_error);
      ASSERT_TRUE(r.full_config.has_value());
      ASSERT_TRUE(r.skeleton_minus_full.has_value());
      EXPECT_GE(r.skeleton_minus_full->value, -3.0 * r.skeleton_minus_full->std_error);
      EXPECT_EQ(r.sigma2.meta["C"], C);
      EXPECT_EQ(r.sigma2.meta["method"], "renewal-skeleton");
    }
  }
}

TEST(UpperBoundMc, IndependentOfThreadCount) {
  UpperBoundOptions o;
  o.replicates = 40;
  o.seed = 5;
  o.threads = 1;
  const auto a = upper_bound_mc(params(300.0, 1.0, 3, 300.0), kExp, 2.0, o);
  o.threads = 4;
  const auto b = upper_bound_mc(params(300.0, 1.0, 3, 300.0), kExp, 2.0, o);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(UpperBoundMc, Errors) {
  UpperBoundOptions o;
  o.replicates = 9;
  EXPECT_THROW(upper_bound_mc(params(1.0), kExp, 1.0, o), std::invalid_argument);
  o.replicates = 10;
  EXPECT_THROW(upper_bound_mc(params(1.0, 0.0), kExp, 1.0, o), std::invalid_argument);
  EXPECT_THROW(upper_bound_mc(params(1.0), kExp, -1.0, o), std::invalid_argument);
}

TEST(AlphaSweep, ExponentsAndBoundColumn) {
  const std::vector<double> alphas{1e10, 1e11, 1e12, 1e13, 1e14};
  const auto t3 = alpha_sweep(params(1.0), kExp, alphas, 0, 1);
  EXPECT_NEAR(t3.slope, -0.4, 0.04);
  EXPECT_NEAR(t3.slope, -0.399074, 1e-5);
  const auto t2 = alpha_sweep(params(1.0, 1.0, 2), kExp, alphas, 0, 1);
  EXPECT_NEAR(t2.slope, -0.5, 0.05);
  for (const auto& row : t3.rows) {
    ModelParams p = params(row.alpha);
    EXPECT_EQ(row.C, optimal_mark(p));
    EXPECT_EQ(row.bound, analytic_upper_bound(p, kExp, row.C));
    EXPECT_TRUE(std::isnan(row.mc_value));
  }
}

TEST(AlphaSweep, SlopeApproachesExponentAsWindowMovesRight) {
  const std::vector<double> low{1e2, 1e3, 1e4};
  const std::vector<double> high{1e12, 1e13, 1e14};
  const double s_low = alpha_sweep(params(1.0), kExp, low, 0, 1).slope;
  const double s_high = alpha_sweep(params(1.0), kExp, high, 0, 1).slope;
  EXPECT_LT(std::abs(s_high + 0.4), std::abs(s_low + 0.4));
}

TEST(AlphaSweep, MonteCarloColumn) {
  const std::vector<double> alphas{10.0, 100.0, 1000.0};
  const auto t = alpha_sweep(params(1.0, 1.0, 3, 200.0), kExp, alphas, 20, 3);
  for (const auto& row : t.rows) {
    EXPECT_FALSE(std::isnan(row.mc_value));
    EXPECT_LE(row.mc_value, row.bound + 3.0 * row.mc_stderr);
  }
  const auto j = t.to_json();
  EXPECT_TRUE(j.contains("slope"));
  EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(AlphaSweep, Errors) {
  const std::vector<double> two{1.0, 2.0};
  const std::vector<double> unsorted{1.0, 3.0, 2.0};
  EXPECT_THROW(alpha_sweep(params(1.0), kExp, two, 0, 1), std::invalid_argument);
  EXPECT_THROW(alpha_sweep(params(1.0), kExp, unsorted, 0, 1), std::invalid_argument);
}

TEST(LogLogSlope, ExactPowerLaw) {
  const std::vector<double> x{1, 10, 100, 1000};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.7));
  EXPECT_NEAR(loglog_slope(x, y), -0.7, 1e-14);
}

TEST(EstimateResult, JsonSchema) {
  const std::vector<double> v{1.0, 2.0, 3.0};
  EstimateResult r = mean_estimate(v);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_NEAR(r.std_error, std::sqrt(1.0 / 3.0), 1e-15);
  r.seed = 12;
  const auto j = r.to_json();
  for (const char* key : {"value", "stderr", "replicates", "seed", "meta"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(EstimateResult, BatchMeans) {
  std::vector<double> series(3000);
  for (std::size_t i = 0; i < series.size(); ++i) series[i] = static_cast<double>(i / 100);
  const auto r = batch_means_estimate(series, 30);
  EXPECT_DOUBLE_EQ(r.value, 14.5);
  EXPECT_EQ(r.replicates, 3000u);
  EXPECT_THROW(batch_means_estimate(series, 1), std::invalid_argument);
}
