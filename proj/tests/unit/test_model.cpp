#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "polaron/model.hpp"

using namespace polaron;

namespace {

ModelParams frohlich() { return ModelParams{1.0, 1.0, 3, 0.0, 10.0}; }

}  // namespace

TEST(Validate, FrohlichDefaultsPass) {
  EXPECT_TRUE(validate(frohlich(), MemoryDensity::exponential()).ok());
}

TEST(Validate, GammaTwoFailsWithMessage) {
  ModelParams p = frohlich();
  p.gamma = 2.0;
  const auto report = validate(p, MemoryDensity::exponential());
  ASSERT_FALSE(report.ok());
  EXPECT_NE(std::find(report.failures.begin(), report.failures.end(), "gamma out of range"), report.failures.end());
}

TEST(Validate, PlanarWithGammaOneAndAHalfPasses) {
  ModelParams p = frohlich();
  p.gamma = 1.5;
  p.d = 2;
  EXPECT_TRUE(validate(p, MemoryDensity::exponential()).ok());
}

TEST(Validate, RejectsEachBrokenField) {
  const auto g = MemoryDensity::exponential();
  auto broken = [&](auto mutate) {
    ModelParams p = frohlich();
    mutate(p);
    return !validate(p, g).ok();
  };
  EXPECT_TRUE(broken([](ModelParams& p) { p.alpha = 0.0; }));
  EXPECT_TRUE(broken([](ModelParams& p) { p.gamma = 0.5; }));
  EXPECT_TRUE(broken([](ModelParams& p) { p.d = 1; }));
  EXPECT_TRUE(broken([](ModelParams& p) { p.epsilon = -1.0; }));
  EXPECT_TRUE(broken([](ModelParams& p) { p.T = 0.0; }));
  EXPECT_TRUE(broken([](ModelParams& p) { p.T = std::numeric_limits<double>::quiet_NaN(); }));
}

TEST(Validate, GenericDensityWithoutNormalizationFails) {
  MemoryDensity::Generic spec;
  spec.name = "half";
  spec.pdf = [](double t) { return 0.5 * std::exp(-t); };
  spec.cdf = [](double t) { return 0.5 * (1.0 - std::exp(-t)); };
  spec.inverse_cdf = [](double p) { return -std::log1p(-2.0 * p); };
  spec.mean = 0.5;
  EXPECT_FALSE(validate(frohlich(), MemoryDensity::generic(spec)).ok());
}

TEST(PartialMoment, ExponentialUnitWindow) {
  const auto g = MemoryDensity::exponential();
  EXPECT_NEAR(g.partial_moment(1.0, 2.0), 2.0 * std::exp(-1.0) - 3.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(g.partial_moment(1.0, 2.0), 0.329753032633, 1e-12);
}

TEST(PartialMoment, EmptyRangeAndFullMean) {
  const auto g = MemoryDensity::exponential();
  EXPECT_EQ(g.partial_moment(1.3, 1.3), 0.0);
  EXPECT_NEAR(g.partial_moment(0.0, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
}

TEST(PartialMoment, ExponentialAntiderivativeProperty) {
  const auto g = MemoryDensity::exponential();
  for (double a : {0.0, 0.3, 1.0, 4.0}) {
    for (double b : {a, a + 0.2, a + 3.0, a + 40.0}) {
      const double exact = (a + 1.0) * std::exp(-a) - (b + 1.0) * std::exp(-b);
      EXPECT_NEAR(g.partial_moment(a, b), exact, 1e-12);
    }
  }
}

TEST(PartialMoment, LomaxByQuadrature) {
  // shape 2, scale 1: antiderivative of 2 r (1 + r)^{-3} is -2/w + 1/w^2, w = 1 + r.
  const auto g = MemoryDensity::lomax(2.0, 1.0);
  auto F = [](double r) { const double w = 1.0 + r; return -2.0 / w + 1.0 / (w * w); };
  EXPECT_NEAR(g.partial_moment(1.0, 2.0), 7.0 / 36.0, 1e-10 * 7.0 / 36.0);
  EXPECT_NEAR(g.partial_moment(0.5, 30.0), F(30.0) - F(0.5), 1e-10 * (F(30.0) - F(0.5)));
  EXPECT_NEAR(g.mean(), 1.0, 1e-12);
}

TEST(PartialMoment, Errors) {
  const auto g = MemoryDensity::exponential();
  EXPECT_THROW(g.partial_moment(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(g.partial_moment(-1.0, 1.0), std::invalid_argument);
}

TEST(IntegratedCdf, ExponentialClosedForm) {
  const auto g = MemoryDensity::exponential();
  EXPECT_NEAR(g.integrated_cdf(3.0), 3.0 - 1.0 + std::exp(-3.0), 1e-13);
  const auto lomax = MemoryDensity::lomax(2.0, 1.0);
  // integral of 1 - (1 + t)^{-2} over [0, T] is T - T / (1 + T).
  EXPECT_NEAR(lomax.integrated_cdf(5.0), 5.0 - 5.0 / 6.0, 1e-10);
}

TEST(Sampling, ReproducibleAndPositive) {
  const auto g = MemoryDensity::exponential();
  Rng a = make_stream(42, 0);
  Rng b = make_stream(42, 0);
  const double x = g.sample(a);
  EXPECT_GT(x, 0.0);
  EXPECT_EQ(x, g.sample(b));
}

TEST(Sampling, MeanAndWindowFraction) {
  const auto g = MemoryDensity::exponential();
  Rng rng = make_stream(11, 0);
  const int n = 1000000;
  double sum = 0.0;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g.sample(rng);
    sum += x;
    inside += (x >= 1.0 && x <= 2.0) ? 1 : 0;
  }
  EXPECT_NEAR(sum / n, 1.0, 3e-3);
  const double p = std::exp(-1.0) - std::exp(-2.0);
  EXPECT_NEAR(p, 0.2325441579, 1e-10);
  EXPECT_NEAR(static_cast<double>(inside) / n, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Sampling, KolmogorovSmirnov) {
  for (const auto& g : {MemoryDensity::exponential(), MemoryDensity::lomax(3.0, 2.0)}) {
    Rng rng = make_stream(2024, 1);
    std::vector<double> xs(10000);
    for (auto& x : xs) x = g.sample(rng);
    std::sort(xs.begin(), xs.end());
    double D = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double F = g.cdf(xs[i]);
      D = std::max({D, (i + 1) / n - F, F - i / n});
    }
    EXPECT_LE(D, 1.628 / std::sqrt(n)) << g.name();
  }
}

TEST(Sampling, ConditionalStaysInRange) {
  for (const auto& g : {MemoryDensity::exponential(), MemoryDensity::lomax(2.0, 1.0)}) {
    Rng rng = make_stream(5, 0);
    for (int i = 0; i < 1000; ++i) {
      const double x = g.sample_conditional(1.0, 2.0, rng);
      EXPECT_GE(x, 1.0);
      EXPECT_LE(x, 2.0);
    }
  }
}

TEST(ModelConfigJson, RoundTripAndDefaults) {
  const auto j = nlohmann::json::parse(R"({"alpha": 2.5, "d": 2, "g": {"kind": "lomax", "shape": 3, "scale": 2}})");
  const ModelConfig mc = model_config_from_json(j);
  EXPECT_EQ(mc.params.alpha, 2.5);
  EXPECT_EQ(mc.params.d, 2);
  EXPECT_EQ(mc.params.gamma, 1.0);
  EXPECT_FALSE(mc.g.is_exponential());
  const ModelConfig back = model_config_from_json(to_json(mc));
  EXPECT_EQ(back.params.alpha, 2.5);
  EXPECT_NEAR(back.g.pdf(0.7), mc.g.pdf(0.7), 1e-15);
}

TEST(ModelConfigJson, UnknownKindThrows) {
  const auto j = nlohmann::json::parse(R"({"g": {"kind": "gamma"}})");
  EXPECT_THROW(model_config_from_json(j), std::invalid_argument);
}
