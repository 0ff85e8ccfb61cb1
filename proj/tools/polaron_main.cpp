// Command-line front end for the samplers, estimators and verification suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polaron/config_io.hpp"
#include "polaron/estimator.hpp"
#include "polaron/model.hpp"
#include "polaron/pointprocess.hpp"
#include "polaron/suites.hpp"

namespace {

using namespace polaron;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("POLARON_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("POLARON_SEED is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

// Flags shared by the model-driven subcommands. Values given on the command
// line override the --config file, which overrides the defaults.
struct ModelFlags {
  double alpha = 1.0;
  double gamma = 1.0;
  int d = 3;
  double eps = 0.0;
  double T = 10.0;
  std::string config;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* T_opt = nullptr;

  void attach(CLI::App* app, double default_eps) {
    eps = default_eps;
    alpha_opt = app->add_option("--alpha", alpha, "coupling alpha");
    gamma_opt = app->add_option("--gamma", gamma, "potential exponent gamma");
    d_opt = app->add_option("--d", d, "dimension");
    eps_opt = app->add_option("--eps", eps, "potential shift epsilon");
    T_opt = app->add_option("--T", T, "time horizon");
    app->add_option("--config", config, "JSON model file");
  }

  ModelConfig resolve(bool force_default_eps) const {
    ModelConfig mc;
    mc.params.epsilon = eps;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw IoError("cannot open config file " + config);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed config: ") + e.what());
      }
      try {
        if (!j.contains("epsilon") || force_default_eps) j["epsilon"] = eps;
        mc = model_config_from_json(j);
      } catch (const std::exception& e) {
        throw ValidationError(std::string("invalid config: ") + e.what());
      }
    }
    if (alpha_opt->count()) mc.params.alpha = alpha;
    if (gamma_opt->count()) mc.params.gamma = gamma;
    if (d_opt->count()) mc.params.d = d;
    if (eps_opt->count()) mc.params.epsilon = eps;
    if (T_opt->count()) mc.params.T = T;
    if (config.empty()) {
      mc.params.alpha = alpha;
      mc.params.gamma = gamma;
      mc.params.d = d;
      mc.params.T = T;
    }
    const ValidationReport report = validate(mc.params, mc.g);
    if (!report.ok()) throw ValidationError(report.summary());
    return mc;
  }
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw IoError("cannot open output file " + out);
  file << text;
  file.close();
  if (!file) throw IoError("write to " + out + " failed");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// "a:b:xk" for a, a*k, ... up to b, or a comma-separated list.
std::vector<double> parse_alphas(const std::string& spec) {
  std::vector<double> out;
  try {
    if (spec.find(':') != std::string::npos) {
      const auto c1 = spec.find(':');
      const auto c2 = spec.find(':', c1 + 1);
      if (c2 == std::string::npos || spec[c2 + 1] != 'x') throw ValidationError("");
      const double lo = std::stod(spec.substr(0, c1));
      const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
      const double factor = std::stod(spec.substr(c2 + 2));
      if (!(lo > 0.0) || !(factor > 1.0) || !(hi >= lo)) throw ValidationError("");
      for (double a = lo; a <= hi * (1.0 + 1e-12); a *= factor) out.push_back(a);
    } else {
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    }
  } catch (const std::exception&) {
    throw ValidationError("cannot parse --alphas '" + spec + "' (use lo:hi:xFACTOR or a,b,c)");
  }
  return out;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw ValidationError("unsupported --format " + format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval point process tools for the polaron diffusion constant"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string format = "json";

  // sample
  auto* sample = app.add_subcommand("sample", "draw one configuration");
  ModelFlags sample_model;
  sample_model.attach(sample, 1.0);
  std::string process = "gamma";
  std::optional<double> sample_C;
  sample->add_option("--process", process, "gamma (interval process) or thinned (marked, lengths in [1,2])")
      ->check(CLI::IsMember({"gamma", "thinned"}));
  sample->add_option("--C", sample_C, "mark value (thinned); default alpha^{1/(2+d)}");

  // estimate-upper
  auto* upper = app.add_subcommand("estimate-upper", "Monte Carlo of the renewal upper bound");
  ModelFlags upper_model;
  upper_model.attach(upper, 1.0);
  std::optional<double> upper_C;
  std::size_t reps = 100;
  bool full = false;
  upper->add_option("--C", upper_C, "mark value; default alpha^{1/(2+d)}");
  upper->add_option("--reps", reps, "replicates (>= 10)");
  upper->add_flag("--full", full, "also evaluate sigma2 on the full thinned configuration");

  // estimate-mcmc
  auto* mcmc = app.add_subcommand("estimate-mcmc", "birth-death chain for sigma2 and the dormant fraction");
  ModelFlags mcmc_model;
  mcmc_model.attach(mcmc, 0.0);
  McmcConfig chain;
  mcmc->add_option("--steps", chain.steps, "chain length");
  mcmc->add_option("--burn-in", chain.burn_in, "burn-in steps (default 20% of --steps)");

  // bound-table
  auto* table = app.add_subcommand("bound-table", "analytic upper bound");
  ModelFlags table_model;
  table_model.attach(table, 1.0);
  std::string table_alphas;
  std::optional<double> table_C;
  table->add_option("--alphas", table_alphas, "lo:hi:xFACTOR or comma list (overrides --alpha)");
  table->add_option("--C", table_C, "mark value; default alpha^{1/(2+d)} per row");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "bound (and optional Monte Carlo) over alpha with slope fit");
  ModelFlags sweep_model;
  sweep_model.attach(sweep, 1.0);
  std::string sweep_alphas;
  std::size_t sweep_reps = 0;
  sweep->add_option("--alphas", sweep_alphas, "lo:hi:xFACTOR or comma list")->required();
  sweep->add_option("--reps", sweep_reps, "Monte Carlo replicates per row (0: bound only)");

  // verify
  auto* verify = app.add_subcommand("verify", "run all verification suites");

  for (auto* sub : {sample, upper, mcmc, table, sweep, verify}) {
    sub->add_option("--seed", seed, "master seed (default: POLARON_SEED or built-in)");
    sub->add_option("--threads", threads, "worker threads (0: all cores)");
    if (sub != verify) {
      sub->add_option("--out", out, "output file (default stdout)");
      sub->add_option("--format", format, "json or csv");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    auto seed_given = [&](CLI::App* sub) { return sub->get_option("--seed")->count() > 0; };

    if (sample->parsed()) {
      check_format(format, {"json", "csv"});
      const ModelConfig mc = sample_model.resolve(false);
      Rng rng = make_stream(seed_given(sample) ? seed : default_seed(), 0);
      std::ostringstream os;
      if (process == "gamma") {
        const IntervalConfig xi = sample_interval_process(mc.params, mc.g, rng);
        if (format == "csv") write_csv(os, xi);
        else os << dump(to_json(xi));
      } else {
        const double C = sample_C.value_or(optimal_mark(mc.params));
        const MarkedConfig xi = sample_thinned_marked(mc.params, mc.g, C, rng);
        if (format == "csv") write_csv(os, xi);
        else os << dump(to_json(xi));
      }
      emit(os.str(), out);
    } else if (upper->parsed()) {
      check_format(format, {"json"});
      const ModelConfig mc = upper_model.resolve(false);
      UpperBoundOptions opts;
      opts.replicates = reps;
      opts.seed = seed_given(upper) ? seed : default_seed();
      opts.threads = threads;
      opts.full_config = full;
      const double C = upper_C.value_or(optimal_mark(mc.params));
      const UpperBoundReport report = upper_bound_mc(mc.params, mc.g, C, opts);
      nlohmann::json j = report.to_json();
      j["bound"] = analytic_upper_bound(mc.params, mc.g, C);
      j["seed"] = opts.seed;
      emit(dump(j), out);
    } else if (mcmc->parsed()) {
      check_format(format, {"json"});
      const ModelConfig mc = mcmc_model.resolve(true);
      chain.seed = seed_given(mcmc) ? seed : default_seed();
      const McmcReport report = run_birth_death_chain(mc.params, mc.g, chain);
      nlohmann::json j = report.to_json();
      j["seed"] = chain.seed;
      emit(dump(j), out);
    } else if (table->parsed()) {
      check_format(format, {"json", "csv"});
      const ModelConfig mc = table_model.resolve(false);
      const std::vector<double> alphas =
          table_alphas.empty() ? std::vector<double>{mc.params.alpha} : parse_alphas(table_alphas);
      std::ostringstream os;
      nlohmann::json rows = nlohmann::json::array();
      if (format == "csv") os << "alpha,C,bound\n";
      for (double a : alphas) {
        ModelParams p = mc.params;
        p.alpha = a;
        const double C = table_C.value_or(optimal_mark(p));
        const double bound = analytic_upper_bound(p, mc.g, C);
        if (format == "csv") {
          os << format_double(a) << ',' << format_double(C) << ',' << format_double(bound) << '\n';
        } else {
          rows.push_back({{"alpha", a}, {"C", C}, {"bound", bound}});
        }
      }
      if (format == "json") os << dump({{"rows", rows}});
      emit(os.str(), out);
    } else if (sweep->parsed()) {
      check_format(format, {"json", "csv"});
      const ModelConfig mc = sweep_model.resolve(false);
      const std::vector<double> alphas = parse_alphas(sweep_alphas);
      const std::uint64_t s = seed_given(sweep) ? seed : default_seed();
      const SweepTable result = alpha_sweep(mc.params, mc.g, alphas, sweep_reps, s, threads);
      std::ostringstream os;
      if (format == "csv") {
        os << "alpha,C,bound,mc_value,mc_stderr\n";
        for (const auto& r : result.rows) {
          os << format_double(r.alpha) << ',' << format_double(r.C) << ',' << format_double(r.bound) << ','
             << format_double(r.mc_value) << ',' << format_double(r.mc_stderr) << '\n';
        }
      } else {
        nlohmann::json j = result.to_json();
        j["seed"] = s;
        os << dump(j);
      }
      emit(os.str(), out);
    } else if (verify->parsed()) {
      suites::SuiteOptions opts;
      opts.seed = seed_given(verify) ? seed : default_seed();
      opts.threads = threads;
      bool all = true;
      for (const auto* list : {&suites::acceptance_suites(), &suites::invariant_suites()}) {
        for (const auto& suite : *list) {
          const auto r = suites::run_suite(suite, opts);
          all = all && r.passed;
          std::cout << (r.passed ? "PASS" : "FAIL") << "  ";
          if (r.id) std::cout << "[" << r.id << "] ";
          std::cout << r.name << ": " << r.detail << "\n" << std::flush;
        }
      }
      return all ? 0 : 1;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
