#include "polaron/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polaron/kernels.hpp"

namespace polaron {
namespace {

bool key_less(const Interval& a, const Interval& b) {
  return a.s < b.s || (a.s == b.s && a.t < b.t);
}

std::vector<Interval> sorted_copy(std::span<const Interval> intervals) {
  std::vector<Interval> out(intervals.begin(), intervals.end());
  std::stable_sort(out.begin(), out.end(), key_less);
  return out;
}

}  // namespace

IntervalConfig::IntervalConfig(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (const auto& iv : intervals_) {
    if (!(iv.s < iv.t)) throw std::invalid_argument("interval must satisfy s < t");
  }
  std::stable_sort(intervals_.begin(), intervals_.end(), key_less);
}

std::size_t IntervalConfig::insert(Interval interval) {
  if (!(interval.s < interval.t)) throw std::invalid_argument("interval must satisfy s < t");
  auto pos = std::upper_bound(intervals_.begin(), intervals_.end(), interval, key_less);
  pos = intervals_.insert(pos, interval);
  return static_cast<std::size_t>(pos - intervals_.begin());
}

MarkedConfig::MarkedConfig(IntervalConfig config, std::vector<double> marks)
    : config_(std::move(config)), marks_(std::move(marks)) {
  if (config_.size() != marks_.size()) {
    throw std::invalid_argument("marked config: one mark per interval required");
  }
  for (double u : marks_) {
    if (!(u >= 0.0)) throw std::invalid_argument("marked config: marks must be nonnegative");
  }
}

IntervalConfig sample_interval_process(const ModelParams& params, const MemoryDensity& g, Rng& rng) {
  std::vector<Interval> out;
  if (!(params.alpha > 0.0)) return IntervalConfig{};
  double s = 0.0;
  while (true) {
    s += -std::log(uniform01_open_left(rng)) / params.alpha;
    if (s > params.T) break;
    const double tau = g.sample(rng);
    const double t = s + tau;
    if (tau > 0.0 && t <= params.T) out.push_back({s, t});
  }
  return IntervalConfig(std::move(out));
}

std::size_t count_covering(std::span<const Interval> intervals, double r) {
  return static_cast<std::size_t>(std::count_if(
      intervals.begin(), intervals.end(), [r](const Interval& iv) { return iv.s <= r && r <= iv.t; }));
}

double dormant_time(std::span<const Interval> intervals, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("dormant_time: T must be positive");
  const auto sorted = sorted_copy(intervals);
  double dormant = 0.0;
  double covered_to = 0.0;  // right end of the union seen so far, clipped to [0, T]
  for (const auto& iv : sorted) {
    const double lo = std::max(iv.s, 0.0);
    const double hi = std::min(iv.t, T);
    if (hi <= lo) continue;
    if (lo > covered_to) dormant += lo - covered_to;
    covered_to = std::max(covered_to, hi);
  }
  if (T > covered_to) dormant += T - covered_to;
  return dormant;
}

double active_time(std::span<const Interval> intervals, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("active_time: T must be positive");
  const auto sorted = sorted_copy(intervals);
  double active = 0.0;
  bool open = false;
  double run_lo = 0.0;
  double run_hi = 0.0;
  for (const auto& iv : sorted) {
    const double lo = std::max(iv.s, 0.0);
    const double hi = std::min(iv.t, T);
    if (hi <= lo) continue;
    if (open && lo <= run_hi) {
      run_hi = std::max(run_hi, hi);
      continue;
    }
    if (open) active += run_hi - run_lo;
    run_lo = lo;
    run_hi = hi;
    open = true;
  }
  if (open) active += run_hi - run_lo;
  return active;
}

std::vector<std::size_t> renewal_skeleton_indices(const IntervalConfig& config) {
  std::vector<std::size_t> picked;
  if (config.empty()) return picked;
  picked.push_back(0);
  double departure = config[0].t;
  for (std::size_t j = 1; j < config.size(); ++j) {
    if (config[j].s > departure) {
      picked.push_back(j);
      departure = config[j].t;
    }
  }
  return picked;
}

IntervalConfig renewal_skeleton(const IntervalConfig& config) {
  std::vector<Interval> out;
  for (std::size_t i : renewal_skeleton_indices(config)) out.push_back(config[i]);
  return IntervalConfig(std::move(out));
}

MarkedConfig sample_thinned_marked(const ModelParams& params, const MemoryDensity& g, double C,
                                   Rng& rng) {
  if (!(params.epsilon > 0.0)) {
    throw std::invalid_argument("sample_thinned_marked: epsilon must be positive");
  }
  if (!(C > 0.0)) throw std::invalid_argument("sample_thinned_marked: C must be positive");

  // Same queue construction with arrival rate beta = alpha eps p g([1,2]) and
  // service law g conditioned on [1, 2].
  const double mass = g.mass(1.0, 2.0);
  const double beta = params.alpha * params.epsilon * mark_probability(C, params) * mass;
  std::vector<Interval> out;
  if (beta > 0.0) {
    double s = 0.0;
    while (true) {
      s += -std::log(uniform01_open_left(rng)) / beta;
      if (s >= params.T) break;
      const double t = s + g.sample_conditional(1.0, 2.0, rng);
      if (t < params.T) out.push_back({s, t});
    }
  }
  std::vector<double> marks(out.size(), C);
  return MarkedConfig(IntervalConfig(std::move(out)), std::move(marks));
}

MarkedConfig independent_marking(const IntervalConfig& config, const ModelParams& params, double C,
                                 Rng& rng) {
  if (!(C > 0.0)) throw std::invalid_argument("independent_marking: C must be positive");
  const double p = mark_probability(C, params);
  std::vector<double> marks(config.size(), 0.0);
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config[i].length() <= 2.0 && uniform01(rng) < p) marks[i] = C;
  }
  return MarkedConfig(config, std::move(marks));
}

}  // namespace polaron
