#include "polaron/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"
#include "polaron/gaussian.hpp"
#include "polaron/kernels.hpp"
#include "polaron/pointprocess.hpp"

namespace polaron {

double analytic_upper_bound(const ModelParams& params, const MemoryDensity& g, double C) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("analytic_upper_bound: epsilon must be positive");
  if (!(C > 0.0)) throw std::invalid_argument("analytic_upper_bound: C must be positive");
  const double covered = params.alpha * params.epsilon * mark_probability(C, params) *
                         g.partial_moment(1.0, 2.0);
  return 1.0 / (1.0 + covered) + 1.0 / (C * C + 1.0);
}

double optimal_mark(const ModelParams& params) {
  return std::pow(params.alpha, 1.0 / (2.0 + params.d));
}

RenewalPrediction renewal_prediction(const ModelParams& params, const MemoryDensity& g, double C) {
  RenewalPrediction r;
  const double mass = g.mass(1.0, 2.0);
  r.beta = params.alpha * params.epsilon * mark_probability(C, params) * mass;
  r.mean_length = mass > 0.0 ? g.partial_moment(1.0, 2.0) / mass : 0.0;
  if (r.beta > 0.0) {
    const double cycle = 1.0 / r.beta + r.mean_length;
    r.cycle_rate = 1.0 / cycle;
    r.dormant_fraction = (1.0 / r.beta) / cycle;
  }
  return r;
}

nlohmann::json UpperBoundReport::to_json() const {
  nlohmann::json j = {{"sigma2", sigma2.to_json()},
                      {"dormant_fraction", dormant_fraction.to_json()},
                      {"renewal_rate", renewal_rate.to_json()},
                      {"mean_points", mean_points}};
  if (full_config) j["full_config"] = full_config->to_json();
  if (skeleton_minus_full) j["skeleton_minus_full"] = skeleton_minus_full->to_json();
  return j;
}

UpperBoundReport upper_bound_mc(const ModelParams& params, const MemoryDensity& g, double C,
                                const UpperBoundOptions& options) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("upper_bound_mc: epsilon must be positive");
  if (!(C > 0.0)) throw std::invalid_argument("upper_bound_mc: C must be positive");
  if (options.replicates < 10) throw std::invalid_argument("upper_bound_mc: need at least 10 replicates");

  const std::size_t reps = options.replicates;
  std::vector<double> sigma2(reps), dormant(reps), rate(reps), points(reps), full(reps), diff(reps);
  detail::parallel_for(reps, options.threads, [&](std::size_t r) {
    Rng rng = make_stream(options.seed, r);
    const MarkedConfig thinned = sample_thinned_marked(params, g, C, rng);
    const IntervalConfig skeleton = renewal_skeleton(thinned.config());
    const std::vector<double> marks(skeleton.size(), C);
    sigma2[r] = sigma2_disjoint(skeleton, marks, params.T);
    dormant[r] = dormant_time(skeleton, params.T) / params.T;
    rate[r] = static_cast<double>(skeleton.size()) / params.T;
    points[r] = static_cast<double>(thinned.size());
    if (options.full_config) {
      full[r] = sigma2_exact(thinned.intervals(), thinned.marks(), params.T);
      diff[r] = sigma2[r] - full[r];
    }
  });

  const nlohmann::json meta = {{"alpha", params.alpha}, {"gamma", params.gamma}, {"d", params.d},
                               {"epsilon", params.epsilon}, {"T", params.T}, {"C", C}};
  auto finish = [&](const std::vector<double>& values, const char* method) {
    EstimateResult e = mean_estimate(values);
    e.seed = options.seed;
    e.meta = meta;
    e.meta["method"] = method;
    return e;
  };
  UpperBoundReport report;
  report.sigma2 = finish(sigma2, "renewal-skeleton");
  report.dormant_fraction = finish(dormant, "skeleton-dormant-fraction");
  report.renewal_rate = finish(rate, "skeleton-renewal-rate");
  report.mean_points = mean_estimate(points).value;
  if (options.full_config) {
    report.full_config = finish(full, "full-config");
    report.skeleton_minus_full = finish(diff, "skeleton-minus-full");
  }
  return report;
}

nlohmann::json SweepTable::to_json() const {
  auto jrows = nlohmann::json::array();
  for (const auto& r : rows) {
    jrows.push_back({{"alpha", r.alpha}, {"C", r.C}, {"bound", r.bound},
                     {"mc_value", r.mc_value}, {"mc_stderr", r.mc_stderr}});
  }
  return {{"rows", jrows}, {"slope", slope}};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepTable alpha_sweep(const ModelParams& base, const MemoryDensity& g, std::span<const double> alphas,
                       std::size_t replicates, std::uint64_t seed, unsigned threads) {
  if (alphas.size() < 3) throw std::invalid_argument("alpha_sweep: need at least three alphas");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) throw std::invalid_argument("alpha_sweep: alphas must be positive");
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw std::invalid_argument("alpha_sweep: alphas must be increasing");
    }
  }
  SweepTable table;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ModelParams params = base;
    params.alpha = alphas[i];
    SweepRow row;
    row.alpha = alphas[i];
    row.C = optimal_mark(params);
    row.bound = analytic_upper_bound(params, g, row.C);
    row.mc_value = std::numeric_limits<double>::quiet_NaN();
    row.mc_stderr = std::numeric_limits<double>::quiet_NaN();
    if (replicates > 0) {
      UpperBoundOptions opts;
      opts.replicates = replicates;
      opts.seed = seed + 0x9E3779B97F4A7C15ULL * (i + 1);
      opts.threads = threads;
      const auto mc = upper_bound_mc(params, g, row.C, opts);
      row.mc_value = mc.sigma2.value;
      row.mc_stderr = mc.sigma2.std_error;
    }
    xs.push_back(row.alpha);
    ys.push_back(row.bound);
    table.rows.push_back(row);
  }
  table.slope = loglog_slope(xs, ys);
  return table;
}

}  // namespace polaron
