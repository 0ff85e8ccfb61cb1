#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polaron/estimate.hpp"
#include "polaron/model.hpp"

namespace polaron {

/// 1 / (1 + alpha eps p(C) int_1^2 r g(r) dr) + 1 / (C^2 + 1): the renewal
/// bound on the limiting variance of the thinned, C-marked process.
/// Throws std::invalid_argument unless epsilon > 0 and C > 0.
double analytic_upper_bound(const ModelParams& params, const MemoryDensity& g, double C);

/// alpha^{1/(2+d)}.
double optimal_mark(const ModelParams& params);

struct UpperBoundOptions {
  std::size_t replicates = 100;
  std::uint64_t seed = kDefaultSeed;
  /// Also evaluate sigma2_exact on the whole thinned configuration.
  bool full_config = false;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct UpperBoundReport {
  /// sigma2 of the renewal skeleton (closed form), averaged over replicates.
  EstimateResult sigma2;
  /// Dormant time of the skeleton divided by T.
  EstimateResult dormant_fraction;
  /// Number of skeleton intervals divided by T.
  EstimateResult renewal_rate;
  /// Mean number of intervals in the thinned configuration.
  double mean_points = 0.0;
  /// sigma2_exact on the full thinned configuration, when requested.
  std::optional<EstimateResult> full_config;
  /// Paired replicate differences skeleton - full, when requested.
  std::optional<EstimateResult> skeleton_minus_full;

  nlohmann::json to_json() const;
};

/// Monte Carlo estimate of E[sigma2_T] of the thinned marked process:
/// each replicate samples it, keeps its renewal skeleton and evaluates the
/// disjoint closed form. Replicate r uses stream make_stream(seed, r), so the
/// result does not depend on the thread count.
/// Throws std::invalid_argument unless epsilon > 0, C > 0, replicates >= 10.
UpperBoundReport upper_bound_mc(const ModelParams& params, const MemoryDensity& g, double C,
                                const UpperBoundOptions& options);

/// Renewal-theory predictions for the thinned process: arrival rate beta,
/// mean kept length, skeleton cycle rate 1/(1/beta + m) and dormant fraction
/// (1/beta)/(1/beta + m) = 1/(1 + alpha eps p(C) int_1^2 r g).
struct RenewalPrediction {
  double beta = 0.0;
  double mean_length = 0.0;
  double cycle_rate = 0.0;
  double dormant_fraction = 1.0;
};

RenewalPrediction renewal_prediction(const ModelParams& params, const MemoryDensity& g, double C);

struct SweepRow {
  double alpha = 0.0;
  double C = 0.0;
  double bound = 0.0;
  /// NaN when the sweep ran without Monte Carlo replicates.
  double mc_value = 0.0;
  double mc_stderr = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  /// Least-squares slope of log(bound) against log(alpha) over all rows.
  double slope = 0.0;

  nlohmann::json to_json() const;
};

/// Bound (and optionally Monte Carlo) table over increasing alphas with
/// C = optimal_mark(alpha). `replicates == 0` skips the Monte Carlo column.
/// Throws std::invalid_argument for fewer than three or non-increasing alphas.
SweepTable alpha_sweep(const ModelParams& base, const MemoryDensity& g, std::span<const double> alphas,
                       std::size_t replicates, std::uint64_t seed, unsigned threads = 0);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Birth-death Metropolis-Hastings over marked configurations.
struct McmcConfig {
  std::size_t steps = 200000;
  /// 0 selects 20% of `steps`.
  std::size_t burn_in = 0;
  double p_birth = 0.3;
  double p_death = 0.3;
  double p_mark = 0.2;
  double p_shift = 0.2;
  /// Standard deviation of the log-scale mark random walk.
  double mark_scale = 0.5;
  /// Standard deviation of the endpoint random walk of the shift move.
  double shift_scale = 0.5;
  std::size_t batches = 30;
  std::uint64_t seed = kDefaultSeed;

  std::size_t effective_burn_in() const { return burn_in ? burn_in : steps / 5; }
};

struct McmcReport {
  EstimateResult sigma2;
  EstimateResult dormant_fraction;
  double acceptance_rate = 0.0;
  double mean_points = 0.0;

  nlohmann::json to_json() const;
};

/// Runs one chain targeting the joint law of intervals and marks,
/// w(xi, u) = prod_i [alpha g(t_i - s_i) rho(u_i)] * phi(xi, u) against the
/// unit Poisson reference, and averages sigma2_T and the dormant fraction
/// over the post-burn-in states. Standard errors are batch means.
/// Throws std::invalid_argument for epsilon != 0 or an inconsistent config,
/// std::runtime_error when an acceptance ratio is negative or NaN.
McmcReport run_birth_death_chain(const ModelParams& params, const MemoryDensity& g,
                                 const McmcConfig& config);

EstimateResult mcmc_diffusion(const ModelParams& params, const MemoryDensity& g,
                              const McmcConfig& config);

EstimateResult dormant_fraction_mcmc(const ModelParams& params, const MemoryDensity& g,
                                     const McmcConfig& config);

}  // namespace polaron
