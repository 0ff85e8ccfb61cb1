#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polaron/estimator.hpp"
#include "polaron/gaussian.hpp"
#include "polaron/kernels.hpp"

namespace polaron {
namespace {

struct ChainState {
  std::vector<Interval> intervals;
  std::vector<double> marks;
  double log_phi = 0.0;
};

// Half-Cauchy(1) proposal for marks of newborn intervals.
double half_cauchy_sample(Rng& rng) {
  return std::tan(0.5 * std::numbers::pi * uniform01(rng));
}

double half_cauchy_log_density(double u) {
  return std::log(2.0 / (std::numbers::pi * (1.0 + u * u)));
}

// Draws (s, t) from the normalized intensity alpha g(t - s) ds dt on
// {0 <= s < t <= T}: the length has density proportional to g(tau)(T - tau).
Interval sample_birth_interval(const MemoryDensity& g, double T, Rng& rng) {
  for (;;) {
    const double tau = g.sample_conditional(0.0, T, rng);
    if (!(tau > 0.0) || uniform01(rng) * T >= T - tau) continue;
    const double s = uniform01(rng) * (T - tau);
    return {s, s + tau};
  }
}

void check_config(const ModelParams& params, const McmcConfig& c) {
  if (params.epsilon != 0.0) throw std::invalid_argument("mcmc: epsilon must be 0");
  if (!(params.alpha >= 0.0)) throw std::invalid_argument("mcmc: alpha must be nonnegative");
  if (!(params.T > 0.0)) throw std::invalid_argument("mcmc: T must be positive");
  if (!(params.gamma > 0.0) || !(params.gamma < params.d)) {
    throw std::invalid_argument("mcmc: need 0 < gamma < d");
  }
  const double probs[] = {c.p_birth, c.p_death, c.p_mark, c.p_shift};
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("mcmc: move probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mcmc: move probabilities must sum to 1");
  if (c.p_birth > 0.0 && !(c.p_death > 0.0)) {
    throw std::invalid_argument("mcmc: births need a positive death probability");
  }
  if (!(c.mark_scale > 0.0) || !(c.shift_scale > 0.0)) {
    throw std::invalid_argument("mcmc: proposal scales must be positive");
  }
  if (c.batches < 2) throw std::invalid_argument("mcmc: need at least two batches");
  if (c.effective_burn_in() >= c.steps || c.steps - c.effective_burn_in() < c.batches) {
    throw std::invalid_argument("mcmc: too few post burn-in steps");
  }
}

bool accept(double log_ratio, Rng& rng) {
  if (std::isnan(log_ratio)) throw std::runtime_error("mcmc: acceptance ratio is NaN");
  if (log_ratio >= 0.0) return true;
  return uniform01(rng) < std::exp(log_ratio);
}

}  // namespace

nlohmann::json McmcReport::to_json() const {
  return {{"sigma2", sigma2.to_json()},
          {"dormant_fraction", dormant_fraction.to_json()},
          {"acceptance_rate", acceptance_rate},
          {"mean_points", mean_points}};
}

McmcReport run_birth_death_chain(const ModelParams& params, const MemoryDensity& g,
                                 const McmcConfig& config) {
  check_config(params, config);
  const double T = params.T;
  const int d = params.d;
  const double gamma = params.gamma;
  const std::size_t burn_in = config.effective_burn_in();

  McmcReport report;
  const nlohmann::json meta = {{"alpha", params.alpha}, {"gamma", gamma}, {"d", d}, {"T", T},
                               {"method", "birth-death-mcmc"}, {"steps", config.steps},
                               {"burn_in", burn_in}};
  if (params.alpha == 0.0) {
    // Empty configuration with probability one.
    report.sigma2.value = 1.0;
    report.dormant_fraction.value = 1.0;
    report.sigma2.replicates = report.dormant_fraction.replicates = config.steps - burn_in;
    report.sigma2.seed = report.dormant_fraction.seed = config.seed;
    report.sigma2.meta = report.dormant_fraction.meta = meta;
    return report;
  }

  const double log_mu_total = std::log(params.alpha * g.integrated_cdf(T));
  const double log_kappa = std::log(mark_density(1.0, gamma));
  auto log_rho = [&](double u) { return log_kappa + (gamma - 1.0) * std::log(u); };
  // log of mu(triangle) rho(u) / (q(s,t) h(u)) for a newborn (s,t,u); the
  // interval factor cancels against its proposal.
  auto log_birth_factor = [&](double u) {
    return log_mu_total + log_rho(u) - half_cauchy_log_density(u);
  };

  Rng rng = make_stream(config.seed, 0);
  ChainState state;
  std::vector<double> sigma2_series, dormant_series;
  sigma2_series.reserve(config.steps - burn_in);
  dormant_series.reserve(config.steps - burn_in);
  double sigma2_now = 1.0;
  double dormant_now = 1.0;
  double points_sum = 0.0;
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  auto commit = [&](ChainState&& next) {
    state = std::move(next);
    sigma2_now = sigma2_exact(state.intervals, state.marks, T);
    dormant_now = dormant_time(state.intervals, T) / T;
    ++accepted;
  };

  const double c_birth = config.p_birth;
  const double c_death = c_birth + config.p_death;
  const double c_mark = c_death + config.p_mark;

  for (std::size_t step = 0; step < config.steps; ++step) {
    const double pick = uniform01(rng);
    const std::size_t n = state.intervals.size();
    if (pick < c_birth) {
      ++proposed;
      ChainState next = state;
      const Interval iv = sample_birth_interval(g, T, rng);
      const double u = half_cauchy_sample(rng);
      next.intervals.push_back(iv);
      next.marks.push_back(u);
      next.log_phi = log_weight_normalizer(next.intervals, next.marks, d);
      const double log_ratio = log_birth_factor(u) + next.log_phi - state.log_phi +
                               std::log(config.p_death) - std::log(config.p_birth) -
                               std::log(static_cast<double>(n + 1));
      if (accept(log_ratio, rng)) commit(std::move(next));
    } else if (pick < c_death) {
      if (n > 0) {
        ++proposed;
        const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
        ChainState next = state;
        next.intervals.erase(next.intervals.begin() + static_cast<std::ptrdiff_t>(i));
        next.marks.erase(next.marks.begin() + static_cast<std::ptrdiff_t>(i));
        next.log_phi = log_weight_normalizer(next.intervals, next.marks, d);
        const double log_ratio = -log_birth_factor(state.marks[i]) + next.log_phi - state.log_phi +
                                 std::log(config.p_birth) - std::log(config.p_death) +
                                 std::log(static_cast<double>(n));
        if (accept(log_ratio, rng)) commit(std::move(next));
      }
    } else if (pick < c_mark) {
      if (n > 0) {
        ++proposed;
        const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
        ChainState next = state;
        const double step_log = config.mark_scale * standard_normal(rng);
        next.marks[i] = state.marks[i] * std::exp(step_log);
        next.log_phi = log_weight_normalizer(next.intervals, next.marks, d);
        const double log_ratio = gamma * step_log + next.log_phi - state.log_phi;
        if (accept(log_ratio, rng)) commit(std::move(next));
      }
    } else {
      if (n > 0) {
        ++proposed;
        const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
        const Interval old = state.intervals[i];
        const Interval moved{old.s + config.shift_scale * standard_normal(rng),
                             old.t + config.shift_scale * standard_normal(rng)};
        if (moved.s >= 0.0 && moved.s < moved.t && moved.t <= T) {
          ChainState next = state;
          next.intervals[i] = moved;
          next.log_phi = log_weight_normalizer(next.intervals, next.marks, d);
          const double log_ratio = std::log(g.pdf(moved.length())) - std::log(g.pdf(old.length())) +
                                   next.log_phi - state.log_phi;
          if (accept(log_ratio, rng)) commit(std::move(next));
        }
      }
    }
    if (step >= burn_in) {
      sigma2_series.push_back(sigma2_now);
      dormant_series.push_back(dormant_now);
      points_sum += static_cast<double>(state.intervals.size());
    }
  }

  auto finish = [&](const std::vector<double>& series) {
    EstimateResult e = batch_means_estimate(series, config.batches);
    e.seed = config.seed;
    nlohmann::json m = meta;
    m["batches"] = config.batches;
    e.meta = m;
    return e;
  };
  report.sigma2 = finish(sigma2_series);
  report.dormant_fraction = finish(dormant_series);
  report.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  report.mean_points = points_sum / static_cast<double>(sigma2_series.size());
  return report;
}

EstimateResult mcmc_diffusion(const ModelParams& params, const MemoryDensity& g,
                              const McmcConfig& config) {
  return run_birth_death_chain(params, g, config).sigma2;
}

EstimateResult dormant_fraction_mcmc(const ModelParams& params, const MemoryDensity& g,
                                     const McmcConfig& config) {
  return run_birth_death_chain(params, g, config).dormant_fraction;
}

}  // namespace polaron
