#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "polaron/rng.hpp"

namespace polaron {

/// Parameters of the path measure: pair potential 1/|x|^gamma + epsilon in
/// dimension d, coupling alpha, finite horizon T.
struct ModelParams {
  double alpha = 1.0;
  double gamma = 1.0;
  int d = 3;
  double epsilon = 0.0;
  double T = 10.0;
};

struct ValidationReport {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  /// Failures joined with "; " (empty when ok).
  std::string summary() const;
};

/// Probability density of the interaction time lag on [0, inf).
///
/// The exponential variant is handled in closed form. Generic densities carry
/// their own pdf, cdf and inverse cdf; sampling is always by inversion so a
/// seeded engine gives the same draws on every platform with the same libm.
class MemoryDensity {
 public:
  struct Exponential {
    double rate = 1.0;
  };
  struct Generic {
    std::string name;
    std::function<double(double)> pdf;
    std::function<double(double)> cdf;
    std::function<double(double)> inverse_cdf;
    double mean = 0.0;
    /// Parameters echoed back when the density is serialized.
    nlohmann::json parameters = nlohmann::json::object();
  };

  MemoryDensity() : impl_(Exponential{}) {}

  static MemoryDensity exponential(double rate = 1.0);
  static MemoryDensity generic(Generic spec);
  /// Lomax (Pareto type II) density shape/scale * (1 + t/scale)^-(shape+1);
  /// requires shape > 1 for a finite mean.
  static MemoryDensity lomax(double shape, double scale = 1.0);

  bool is_exponential() const { return std::holds_alternative<Exponential>(impl_); }
  std::string name() const;

  double pdf(double t) const;
  double cdf(double t) const;
  double inverse_cdf(double p) const;
  double mean() const;

  /// Integral of r g(r) over [a, b]; b may be +inf. Throws
  /// std::invalid_argument when a > b or a < 0.
  double partial_moment(double a, double b) const;

  /// Probability mass of [a, b].
  double mass(double a, double b) const { return cdf(b) - cdf(a); }

  /// Integral of the cdf over [0, T], i.e. the expected number of completed
  /// services per unit arrival rate in an M/G/inf queue observed on [0, T].
  double integrated_cdf(double T) const;

  double sample(Rng& rng) const;
  /// Draw from g conditioned on [a, b].
  double sample_conditional(double a, double b, Rng& rng) const;

  nlohmann::json to_json() const;

 private:
  std::variant<Exponential, Generic> impl_;
};

ValidationReport validate(const ModelParams& params, const MemoryDensity& g);

/// Model read from a JSON object
/// {"alpha", "gamma", "d", "epsilon", "T", "g": {"kind": ...}}.
/// Missing keys keep their defaults. g kinds: "exponential" {rate},
/// "lomax" {shape, scale}.
struct ModelConfig {
  ModelParams params;
  MemoryDensity g;
};

ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& config);

}  // namespace polaron
