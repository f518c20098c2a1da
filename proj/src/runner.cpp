#include "temper/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "temper/csv.hpp"
#include "temper/version.hpp"

namespace temper {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" +
                             (dir / name).string() + "'");
  }
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    std::uint64_t root_seed, const json& config_echo,
                    const std::vector<std::string>& outputs,
                    double runtime_seconds) {
  json manifest;
  manifest["artifact_version"] = kVersion;
  manifest["command"] = command;
  manifest["root_seed"] = root_seed;
  manifest["config"] = config_echo;
  manifest["outputs"] = outputs;
  manifest["runtime_seconds"] = runtime_seconds;
  std::ofstream out = open_output(dir, "manifest.json");
  out << manifest.dump(2) << "\n";
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

}  // namespace

void run_sweep(const ExperimentConfig& cfg, const fs::path& out_dir,
               int threads) {
  const Stopwatch timer;
  fs::create_directories(out_dir);
  const ReplicateTable table = run_replicates(cfg, threads);
  const SummaryCurve curve = summarize(table, cfg.scale_by_sqrt_n);

  {
    std::ofstream out = open_output(out_dir, "sweep.csv");
    out << "n,tau,mean,q05,q95,scaled,degenerate_fraction\n";
    for (const SummaryPoint& pt : curve.points) {
      out << pt.n << ',' << format_double(pt.tau) << ','
          << format_double(pt.mean) << ',' << format_double(pt.q05) << ','
          << format_double(pt.q95) << ',' << format_flag(curve.scaled) << ','
          << format_double(pt.degenerate_fraction) << '\n';
    }
  }
  {
    std::ofstream out = open_output(out_dir, "replicates.csv");
    out << "n,replicate,tau,value\n";
    for (const ReplicateRow& row : table.rows) {
      out << row.n << ',' << row.replicate << ',' << format_double(row.tau)
          << ',' << format_double(row.value) << '\n';
    }
  }
  write_manifest(out_dir, "sweep", cfg.root_seed, echo_config(cfg),
                 {"sweep.csv", "replicates.csv"}, timer.seconds());
}

void run_select(const ExperimentConfig& cfg, const fs::path& out_dir,
                int threads) {
  const Stopwatch timer;
  fs::create_directories(out_dir);
  const std::vector<SelectionRow> rows = tau_selection_histogram(cfg, threads);
  {
    std::ofstream out = open_output(out_dir, "selection.csv");
    out << "n,replicate,tau_star,elpd_at_star,lower_flag,upper_flag\n";
    for (const SelectionRow& row : rows) {
      out << row.n << ',' << row.replicate << ','
          << format_double(row.tau_star) << ','
          << format_double(row.elpd_at_star) << ','
          << format_flag(row.at_lower_boundary) << ','
          << format_flag(row.at_upper_boundary) << '\n';
    }
  }
  write_manifest(out_dir, "select", cfg.root_seed, echo_config(cfg),
                 {"selection.csv"}, timer.seconds());
}

void run_risk(const RiskArgs& args, const fs::path& out_dir) {
  const Stopwatch timer;
  if (args.n_values.empty()) {
    throw std::invalid_argument("risk: need at least one sample size");
  }
  for (long n : args.n_values) {
    if (n < 1) throw std::invalid_argument("risk: n values must be >= 1");
  }
  fs::create_directories(out_dir);
  {
    std::ofstream out = open_output(out_dir, "risk.csv");
    out << "n,tau,risk";
    for (const NamedSchedule& s : args.schedules) out << ',' << s.label;
    out << '\n';
    for (long n : args.n_values) {
      // Schedule columns depend only on n, not on the row's grid tau.
      std::vector<double> sched_risk;
      sched_risk.reserve(args.schedules.size());
      for (const NamedSchedule& s : args.schedules) {
        sched_risk.push_back(
            risk_normal(n, schedule_tau(s.schedule, n), args.sigma0_sq));
      }
      for (double tau : args.grid.points()) {
        out << n << ',' << format_double(tau) << ','
            << format_double(risk_normal(n, tau, args.sigma0_sq));
        for (double r : sched_risk) out << ',' << format_double(r);
        out << '\n';
      }
    }
  }

  json echo;
  echo["n_values"] = args.n_values;
  const auto& pts = args.grid.points();
  echo["grid"] = {{"lo", pts.front()},
                  {"hi", pts.back()},
                  {"points", static_cast<long>(pts.size())}};
  if (std::isinf(args.sigma0_sq)) {
    echo["sigma0_sq"] = "flat";
  } else {
    echo["sigma0_sq"] = args.sigma0_sq;
  }
  json scheds = json::array();
  for (const NamedSchedule& s : args.schedules) scheds.push_back(s.label);
  echo["schedules"] = scheds;
  write_manifest(out_dir, "risk", 0, echo, {"risk.csv"}, timer.seconds());
}

}  // namespace temper
