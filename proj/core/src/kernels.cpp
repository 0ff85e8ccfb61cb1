#include "polaron/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polaron/gaussian.hpp"

namespace polaron {
namespace {

constexpr std::size_t kMaxTensorSize = 3;
constexpr int kMaxNodesPerPanel = 1024;

double mark_density_constant(double gamma) {
  return std::pow(2.0, (2.0 - gamma) / 2.0) / std::tgamma(gamma / 2.0);
}

double tail_exponent(const ModelParams& params, const QuadratureSpec& spec) {
  if (spec.tail_exponent > 0.0) return spec.tail_exponent;
  return 1.0 / (params.d - params.gamma);
}

// Graded panels on [0, 1]: [0, r^{P-1}], [r^{P-1}, r^{P-2}], ..., [r, 1].
std::vector<std::pair<double, double>> graded_panels(int panels, double ratio) {
  std::vector<std::pair<double, double>> out;
  double hi = 1.0;
  for (int p = 0; p < panels - 1; ++p) {
    const double lo = hi * ratio;
    out.emplace_back(lo, hi);
    hi = lo;
  }
  out.emplace_back(0.0, hi);
  return out;
}

// Calls f(node, weight) for a graded Gauss-Legendre rule on [0, 1].
template <class F>
void for_each_unit_node(const QuadratureSpec& spec, F&& f) {
  std::vector<double> x, w;
  gauss_legendre(spec.nodes_per_panel, x, w);
  for (const auto& [lo, hi] : graded_panels(spec.panels, spec.grading)) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < x.size(); ++k) f(mid + half * x[k], half * w[k]);
  }
}

void check_params(const ModelParams& params) {
  if (!(params.gamma > 0.0) || !(params.gamma < params.d)) {
    throw std::invalid_argument("mark measure needs 0 < gamma < d");
  }
  if (!(params.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
}

template <class Integrand>
double integrate_marks_1d(const ModelParams& params, QuadratureSpec spec, Integrand f) {
  auto once = [&](const QuadratureSpec& s) {
    const MarkRule rule = mark_rule(params, s, MarkRegion::All, s.split);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * f(rule.nodes[k]);
    return acc;
  };
  double previous = once(spec);
  while (spec.nodes_per_panel < kMaxNodesPerPanel) {
    spec.nodes_per_panel *= 2;
    const double current = once(spec);
    if (std::abs(current - previous) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(current))) {
      return current;
    }
    previous = current;
  }
  throw std::runtime_error("mark quadrature did not reach the requested tolerance");
}

// Sum over the tensor product of rules of prod(weights) * phi(xi, u).
double tensor_weight(const Eigen::MatrixXd& overlap, std::span<const MarkRule> rules, int d) {
  const std::size_t n = rules.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> u(n);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
    }
    total += w * std::exp(log_weight_normalizer(overlap, u, d));
    std::size_t k = 0;
    while (k < n && ++idx[k] == rules[k].nodes.size()) idx[k++] = 0;
    if (k == n) break;
  }
  return total;
}

}  // namespace

double mark_density(double u, double gamma) {
  if (!(u > 0.0)) return 0.0;
  return mark_density_constant(gamma) * std::pow(u, gamma - 1.0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

MarkRule mark_rule(const ModelParams& params, const QuadratureSpec& spec, MarkRegion region,
                   double threshold) {
  check_params(params);
  const double a = region == MarkRegion::All ? spec.split : threshold;
  if (!(a > 0.0)) throw std::invalid_argument("mark_rule: split point must be positive");
  const double gamma = params.gamma;
  const double kappa = mark_density_constant(gamma);
  MarkRule rule;

  // Head piece on [lo, hi] via u = hi x^{1/gamma}, rho(u) du = kappa hi^gamma / gamma dx.
  auto add_head = [&](double lo, double hi) {
    const double hi_gamma = std::pow(hi, gamma);
    const double x0 = lo > 0.0 ? std::pow(lo / hi, gamma) : 0.0;
    for_each_unit_node(spec, [&](double y, double w) {
      const double x = x0 + (1.0 - x0) * y;
      rule.nodes.push_back(hi * std::pow(x, 1.0 / gamma));
      rule.weights.push_back(w * (1.0 - x0) * kappa * hi_gamma / gamma);
    });
  };
  // Tail piece on [lo, inf) via u = lo v^{-q}, rho(u) du = kappa q lo^gamma v^{-q gamma - 1} dv.
  auto add_tail = [&](double lo) {
    const double lo_gamma = std::pow(lo, gamma);
    const double q = tail_exponent(params, spec);
    for_each_unit_node(spec, [&](double v, double w) {
      rule.nodes.push_back(lo * std::pow(v, -q));
      rule.weights.push_back(w * kappa * q * lo_gamma * std::pow(v, -q * gamma - 1.0));
    });
  };

  if (region != MarkRegion::Above) {
    add_head(0.0, a);
    if (params.epsilon > 0.0) {
      rule.nodes.push_back(0.0);
      rule.weights.push_back(params.epsilon);
    }
  }
  if (region != MarkRegion::Below) {
    // A tail started far below the split would put the whole bulk of the
    // integrand into the first few nodes.
    if (region == MarkRegion::Above && a < spec.split) {
      add_head(a, spec.split);
      add_tail(spec.split);
    } else {
      add_tail(a);
    }
  }
  return rule;
}

double expected_potential(double t, const ModelParams& params, const QuadratureSpec& spec) {
  if (!(t > 0.0)) throw std::invalid_argument("expected_potential: t must be positive");
  check_params(params);
  const double half_d = 0.5 * params.d;
  return integrate_marks_1d(params, spec,
                            [t, half_d](double u) { return std::pow(1.0 + u * u * t, -half_d); });
}

double potential_constant(double gamma, int d, const QuadratureSpec& spec) {
  ModelParams params;
  params.gamma = gamma;
  params.d = d;
  params.epsilon = 0.0;
  return expected_potential(1.0, params, spec);
}

double mark_probability(double C, const ModelParams& params) {
  if (!(C > 0.0)) throw std::invalid_argument("mark_probability: C must be positive");
  const double shift = params.epsilon > 0.0 ? params.epsilon / expected_potential(2.0, params) : 0.0;
  return std::pow(2.0, -params.gamma / 2.0) * std::pow(1.0 + 4.0 * C * C, -0.5 * params.d) *
         (1.0 - shift);
}

double configuration_weight(std::span<const Interval> intervals, const ModelParams& params,
                            const QuadratureSpec& spec) {
  if (intervals.size() > kMaxTensorSize) {
    throw std::invalid_argument("configuration_weight: at most three intervals supported");
  }
  check_params(params);
  if (intervals.empty()) return 1.0;
  const MarkRule rule = mark_rule(params, spec, MarkRegion::All, spec.split);
  std::vector<MarkRule> rules(intervals.size(), rule);
  return tensor_weight(overlap_matrix(intervals), rules, params.d);
}

double conditional_mark_probability(std::span<const Interval> intervals, std::size_t index,
                                    std::span<const MarkPattern> pattern, double C,
                                    const ModelParams& params, const QuadratureSpec& spec) {
  const std::size_t n = intervals.size();
  if (n > kMaxTensorSize) {
    throw std::invalid_argument("conditional_mark_probability: at most three intervals supported");
  }
  if (index >= n) throw std::invalid_argument("conditional_mark_probability: index out of range");
  if (pattern.size() != n) throw std::invalid_argument("conditional_mark_probability: pattern size");
  if (!(intervals[index].length() <= 2.0)) {
    throw std::invalid_argument("conditional_mark_probability: interval longer than 2");
  }
  if (!(C > 0.0)) throw std::invalid_argument("conditional_mark_probability: C must be positive");
  check_params(params);

  std::vector<MarkRule> rules;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == index) {
      rules.push_back({});
      continue;
    }
    switch (pattern[j]) {
      case MarkPattern::Free: rules.push_back(mark_rule(params, spec, MarkRegion::All, spec.split)); break;
      case MarkPattern::Below: rules.push_back(mark_rule(params, spec, MarkRegion::Below, C)); break;
      case MarkPattern::Above: rules.push_back(mark_rule(params, spec, MarkRegion::Above, C)); break;
    }
  }
  const Eigen::MatrixXd K = overlap_matrix(intervals);
  rules[index] = mark_rule(params, spec, MarkRegion::Above, C);
  const double above = tensor_weight(K, rules, params.d);
  rules[index] = mark_rule(params, spec, MarkRegion::Below, C);
  const double below = tensor_weight(K, rules, params.d);
  return above / (above + below);
}

}  // namespace polaron
