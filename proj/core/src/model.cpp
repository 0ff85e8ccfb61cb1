#include "polaron/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace polaron {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadAbsTol = 1e-12;
constexpr double kQuadRelTol = 1e-10;

template <class F>
double integrate(F f, double a, double b) {
  if (a == b) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  const double value = Rule::integrate(f, a, b, 20, kQuadRelTol, &error);
  if (!(error <= std::max(kQuadAbsTol, 10.0 * kQuadRelTol * std::abs(value)))) {
    // Boost stops on the relative criterion; accept small absolute errors
    // for integrals that are themselves tiny.
    if (!(error <= 1e-8 * std::max(1.0, std::abs(value)))) {
      throw std::runtime_error("memory density quadrature did not converge");
    }
  }
  return value;
}

// Antiderivative of r * rate * exp(-rate r): -(r + 1/rate) exp(-rate r).
double exp_moment_primitive(double rate, double r) {
  if (std::isinf(r)) return 0.0;
  return -(r + 1.0 / rate) * std::exp(-rate * r);
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (i) out << "; ";
    out << failures[i];
  }
  return out.str();
}

MemoryDensity MemoryDensity::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential memory density needs rate > 0");
  }
  MemoryDensity g;
  g.impl_ = Exponential{rate};
  return g;
}

MemoryDensity MemoryDensity::generic(Generic spec) {
  if (!spec.pdf || !spec.cdf || !spec.inverse_cdf) {
    throw std::invalid_argument("generic memory density needs pdf, cdf and inverse cdf");
  }
  MemoryDensity g;
  g.impl_ = std::move(spec);
  return g;
}

MemoryDensity MemoryDensity::lomax(double shape, double scale) {
  if (!(shape > 1.0) || !(scale > 0.0)) {
    throw std::invalid_argument("lomax memory density needs shape > 1 and scale > 0");
  }
  Generic spec;
  spec.name = "lomax";
  spec.pdf = [shape, scale](double t) {
    return t < 0.0 ? 0.0 : shape / scale * std::pow(1.0 + t / scale, -(shape + 1.0));
  };
  spec.cdf = [shape, scale](double t) {
    if (t <= 0.0) return 0.0;
    if (std::isinf(t)) return 1.0;
    return 1.0 - std::pow(1.0 + t / scale, -shape);
  };
  spec.inverse_cdf = [shape, scale](double p) {
    if (p >= 1.0) return kInf;
    return scale * (std::pow(1.0 - p, -1.0 / shape) - 1.0);
  };
  spec.mean = scale / (shape - 1.0);
  spec.parameters = {{"shape", shape}, {"scale", scale}};
  return generic(std::move(spec));
}

std::string MemoryDensity::name() const {
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    (void)e;
    return "exponential";
  }
  return std::get<Generic>(impl_).name;
}

double MemoryDensity::pdf(double t) const {
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    return t < 0.0 ? 0.0 : e->rate * std::exp(-e->rate * t);
  }
  return std::get<Generic>(impl_).pdf(t);
}

double MemoryDensity::cdf(double t) const {
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    return t <= 0.0 ? 0.0 : -std::expm1(-e->rate * t);
  }
  return std::get<Generic>(impl_).cdf(t);
}

double MemoryDensity::inverse_cdf(double p) const {
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    return -std::log1p(-p) / e->rate;
  }
  return std::get<Generic>(impl_).inverse_cdf(p);
}

double MemoryDensity::mean() const {
  if (auto* e = std::get_if<Exponential>(&impl_)) return 1.0 / e->rate;
  return std::get<Generic>(impl_).mean;
}

double MemoryDensity::partial_moment(double a, double b) const {
  if (!(a >= 0.0)) throw std::invalid_argument("partial_moment: lower limit must be >= 0");
  if (a > b) throw std::invalid_argument("partial_moment: lower limit exceeds upper limit");
  if (a == b) return 0.0;
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    return exp_moment_primitive(e->rate, b) - exp_moment_primitive(e->rate, a);
  }
  const auto& pdf_fn = std::get<Generic>(impl_).pdf;
  return integrate([&pdf_fn](double r) { return r * pdf_fn(r); }, a, b);
}

double MemoryDensity::integrated_cdf(double T) const {
  if (!(T >= 0.0)) throw std::invalid_argument("integrated_cdf: T must be >= 0");
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    // T - (1 - exp(-rate T)) / rate
    return T + std::expm1(-e->rate * T) / e->rate;
  }
  const auto& cdf_fn = std::get<Generic>(impl_).cdf;
  return integrate([&cdf_fn](double r) { return cdf_fn(r); }, 0.0, T);
}

double MemoryDensity::sample(Rng& rng) const { return inverse_cdf(uniform01(rng)); }

double MemoryDensity::sample_conditional(double a, double b, Rng& rng) const {
  if (!(a <= b)) throw std::invalid_argument("sample_conditional: empty range");
  const double lo = cdf(a);
  const double hi = cdf(b);
  if (!(hi > lo)) throw std::invalid_argument("sample_conditional: range carries no mass");
  const double x = inverse_cdf(lo + (hi - lo) * uniform01(rng));
  return std::clamp(x, a, b);
}

nlohmann::json MemoryDensity::to_json() const {
  if (auto* e = std::get_if<Exponential>(&impl_)) {
    return {{"kind", "exponential"}, {"rate", e->rate}};
  }
  const auto& spec = std::get<Generic>(impl_);
  nlohmann::json j = spec.parameters;
  j["kind"] = spec.name;
  return j;
}

ValidationReport validate(const ModelParams& params, const MemoryDensity& g) {
  ValidationReport report;
  auto& f = report.failures;
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) f.emplace_back("alpha must be positive");
  if (!(params.gamma >= 1.0 && params.gamma < 2.0)) f.emplace_back("gamma out of range");
  if (params.d < 2) f.emplace_back("d must be at least 2");
  if (!(params.gamma < params.d)) f.emplace_back("gamma must be below d");
  if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon)) {
    f.emplace_back("epsilon must be nonnegative");
  }
  if (!(params.T > 0.0) || !std::isfinite(params.T)) f.emplace_back("T must be positive");

  if (g.is_exponential()) return report;  // all density conditions hold analytically

  // Heuristic checks for user-supplied densities on t in {0, 0.01, ..., 100}.
  double sup_weighted = 0.0;
  bool negative = false;
  for (int k = 0; k <= 10000; ++k) {
    const double t = 0.01 * k;
    const double value = g.pdf(t);
    if (!(value >= 0.0)) negative = true;
    sup_weighted = std::max(sup_weighted, (1.0 + t) * value);
  }
  if (negative) f.emplace_back("g must be nonnegative");
  if (!std::isfinite(sup_weighted)) f.emplace_back("sup (1+t) g(t) is not finite");

  try {
    const double total = integrate([&g](double t) { return g.pdf(t); }, 0.0, kInf);
    if (std::abs(total - 1.0) > 1e-6) f.emplace_back("g does not integrate to 1");
    const double first = g.partial_moment(0.0, kInf);
    if (!std::isfinite(first) || std::abs(first - g.mean()) > 1e-6 * std::max(1.0, first)) {
      f.emplace_back("g first moment is not finite or disagrees with the declared mean");
    }
  } catch (const std::exception&) {
    f.emplace_back("g integrals did not converge");
  }
  return report;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig config;
  auto& p = config.params;
  p.alpha = j.value("alpha", p.alpha);
  p.gamma = j.value("gamma", p.gamma);
  p.d = j.value("d", p.d);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.T = j.value("T", p.T);
  if (j.contains("g")) {
    const auto& gj = j.at("g");
    const std::string kind = gj.value("kind", std::string("exponential"));
    if (kind == "exponential") {
      config.g = MemoryDensity::exponential(gj.value("rate", 1.0));
    } else if (kind == "lomax") {
      config.g = MemoryDensity::lomax(gj.value("shape", 2.0), gj.value("scale", 1.0));
    } else {
      throw std::invalid_argument("unknown memory density kind '" + kind + "'");
    }
  }
  return config;
}

nlohmann::json to_json(const ModelConfig& config) {
  const auto& p = config.params;
  return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"d", p.d},
          {"epsilon", p.epsilon}, {"T", p.T}, {"g", config.g.to_json()}};
}

}  // namespace polaron
