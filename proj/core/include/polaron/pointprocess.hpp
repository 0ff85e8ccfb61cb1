#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polaron/model.hpp"
#include "polaron/rng.hpp"

namespace polaron {

/// Service interval [s, t] of one customer; length t - s > 0.
struct Interval {
  double s = 0.0;
  double t = 0.0;

  double length() const { return t - s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite collection of intervals, kept sorted by (s, t). Equal keys keep
/// their insertion order.
class IntervalConfig {
 public:
  IntervalConfig() = default;
  /// Throws std::invalid_argument if some interval has s >= t.
  explicit IntervalConfig(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  operator std::span<const Interval>() const { return intervals_; }

  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  /// Inserts after every interval with the same key; returns its position.
  std::size_t insert(Interval interval);

  friend bool operator==(const IntervalConfig&, const IntervalConfig&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Intervals with nonnegative marks, aligned index by index.
class MarkedConfig {
 public:
  MarkedConfig() = default;
  /// Throws std::invalid_argument on length mismatch or a negative mark.
  MarkedConfig(IntervalConfig config, std::vector<double> marks);

  const IntervalConfig& config() const { return config_; }
  std::span<const Interval> intervals() const { return config_.intervals(); }
  std::span<const double> marks() const { return marks_; }
  std::size_t size() const { return marks_.size(); }
  bool empty() const { return marks_.empty(); }

 private:
  IntervalConfig config_;
  std::vector<double> marks_;
};

/// Poisson process with intensity alpha g(t - s) on {0 <= s < t <= T}, built
/// as an M/G/inf queue started empty at 0: rate-alpha arrivals on [0, T],
/// iid service times from g, customers still in service at T dropped.
IntervalConfig sample_interval_process(const ModelParams& params, const MemoryDensity& g, Rng& rng);

/// Number of intervals with s <= r <= t.
std::size_t count_covering(std::span<const Interval> intervals, double r);

/// Lebesgue measure of the points of [0, T] covered by no interval.
double dormant_time(std::span<const Interval> intervals, double T);
/// Lebesgue measure of [0, T] intersected with the union of the intervals.
double active_time(std::span<const Interval> intervals, double T);

/// Greedy renewal subsequence: keep the first interval, then repeatedly the
/// first interval whose arrival is strictly after the last kept departure.
IntervalConfig renewal_skeleton(const IntervalConfig& config);

/// Indices of the intervals selected by renewal_skeleton.
std::vector<std::size_t> renewal_skeleton_indices(const IntervalConfig& config);

/// Poisson process on {0 < s < t < T} with intensity
/// alpha * epsilon * p * g(t - s) restricted to lengths in [1, 2], where p is
/// mark_probability(C); every interval carries mark C.
/// Throws std::invalid_argument if epsilon <= 0 or C <= 0.
MarkedConfig sample_thinned_marked(const ModelParams& params, const MemoryDensity& g, double C,
                                   Rng& rng);

/// Product marking kernel: an interval of length <= 2 gets mark C with
/// probability mark_probability(C), every other interval gets mark 0.
MarkedConfig independent_marking(const IntervalConfig& config, const ModelParams& params, double C,
                                 Rng& rng);

}  // namespace polaron
