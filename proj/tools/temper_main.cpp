// Command-line front end: sweep/select experiments and analytic risk tables.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>

#include "temper/runner.hpp"
#include "temper/version.hpp"

namespace {

using temper::ConfigError;
using temper::IncompatibleConfigError;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIncompatible = 3;

temper::TempSchedule parse_schedule(const std::string& text) {
  // fixed:TAU | power:C:GAMMA | coarsened:ALPHA
  const auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const std::size_t next = s.find(':', pos);
      if (next == std::string::npos) {
        parts.push_back(s.substr(pos));
        break;
      }
      parts.push_back(s.substr(pos, next - pos));
      pos = next + 1;
    }
    return parts;
  };
  const auto number = [&text](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw ConfigError("bad schedule argument '" + text + "'");
    }
    return v;
  };
  const std::vector<std::string> parts = split(text);
  try {
    if (parts.size() == 2 && parts[0] == "fixed") {
      return temper::make_fixed_schedule(number(parts[1]));
    }
    if (parts.size() == 3 && parts[0] == "power") {
      return temper::make_power_decay_schedule(number(parts[1]),
                                               number(parts[2]));
    }
    if (parts.size() == 2 && parts[0] == "coarsened") {
      return temper::make_coarsened_schedule(number(parts[1]));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("bad schedule '" + text + "': " + e.what());
  }
  throw ConfigError("bad schedule '" + text +
                    "' (expected fixed:TAU, power:C:GAMMA or coarsened:ALPHA)");
}

std::string schedule_label(const std::string& text) {
  std::string label = text;
  for (char& c : label) {
    if (c == ':') c = '_';
  }
  return label;
}

constexpr const char* kConfigHelp = R"(Config file: one JSON object with keys
  true_model   normal_iid{mean,sd} | student_t_iid{df,loc,scale} |
               bernoulli_iid{p} |
               mixture_regression{coef,sigma,outlier_rate,outlier_sd}
  model        normal_location{sigma,prior_mean=0,prior_var or "flat"} |
               beta_bernoulli{prior_a,prior_b} |
               linreg{noise_sd,prior_cov matrix or scaled_identity{dim,value}}
  metric       tvd | kl | elpd
  n_values     list of sample sizes (required)
  replicates   datasets per n               (default 200)
  grid         {lo,hi,points} log-spaced    (default 0.01, 100, 61)
  mc_samples   regression covariate draws   (default 10000)
  seed         root seed                    (default 1)
  scale_by_sqrt_n                           (default false)
Unknown keys are errors.)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tempered Bayesian predictive experiments"};
  app.set_version_flag("--version", temper::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string out_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker thread cap (1 = serial)")
      ->capture_default_str();
  app.add_option("--seed", seed_override, "Override the config root seed");

  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Replicate metric curves over the temperature grid");
  sweep->add_option("config", sweep_config, "Experiment config (JSON)")
      ->required();
  sweep->footer(kConfigHelp);

  std::string select_config;
  CLI::App* select = app.add_subcommand(
      "select", "Cross-validated temperature selection per replicate");
  select->add_option("config", select_config, "Experiment config (JSON)")
      ->required();
  select->footer(kConfigHelp);

  std::vector<long> risk_n;
  double grid_lo = 0.01, grid_hi = 100.0;
  long grid_points = 61;
  std::string sigma0 = "flat";
  std::vector<std::string> schedule_texts;
  CLI::App* risk = app.add_subcommand(
      "risk", "Analytic normal-location risk over the grid (no simulation)");
  risk->add_option("--n", risk_n, "Sample sizes")->required();
  risk->add_option("--grid-lo", grid_lo, "Smallest grid temperature")
      ->capture_default_str();
  risk->add_option("--grid-hi", grid_hi, "Largest grid temperature")
      ->capture_default_str();
  risk->add_option("--grid-points", grid_points, "Grid size")
      ->capture_default_str();
  risk->add_option("--sigma0", sigma0, "Prior variance, or 'flat'")
      ->capture_default_str();
  risk->add_option("--schedule", schedule_texts,
                   "Temperature schedule (fixed:TAU, power:C:GAMMA, "
                   "coarsened:ALPHA); repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sweep->parsed() || select->parsed()) {
      const std::string& path = sweep->parsed() ? sweep_config : select_config;
      temper::ExperimentConfig cfg = temper::load_config(path);
      if (seed_override) cfg.root_seed = *seed_override;
      temper::validate(cfg);
      if (sweep->parsed()) {
        temper::run_sweep(cfg, out_dir, threads);
      } else {
        temper::run_select(cfg, out_dir, threads);
      }
    } else {
      temper::RiskArgs args;
      args.n_values = risk_n;
      args.grid = temper::TempGrid::log_spaced(grid_lo, grid_hi,
                                               static_cast<int>(grid_points));
      if (sigma0 == "flat") {
        args.sigma0_sq = std::numeric_limits<double>::infinity();
      } else {
        std::size_t used = 0;
        args.sigma0_sq = std::stod(sigma0, &used);
        if (used != sigma0.size() || !(args.sigma0_sq > 0.0)) {
          throw ConfigError("--sigma0 must be a positive number or 'flat'");
        }
      }
      for (const std::string& text : schedule_texts) {
        args.schedules.push_back(
            {schedule_label(text), parse_schedule(text)});
      }
      temper::run_risk(args, out_dir);
    }
  } catch (const IncompatibleConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
