#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "temper/config_io.hpp"
#include "temper/selection.hpp"

namespace temper {

/// Sweep: replicate metric curves over the temperature grid. Writes
/// sweep.csv, replicates.csv and manifest.json into out_dir.
void run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
               int threads);

/// CV temperature selection per replicate. Writes selection.csv and
/// manifest.json.
void run_select(const ExperimentConfig& cfg,
                const std::filesystem::path& out_dir, int threads);

struct NamedSchedule {
  std::string label;
  TempSchedule schedule;
};

struct RiskArgs {
  std::vector<long> n_values;
  TempGrid grid = TempGrid::default_grid();
  double sigma0_sq = std::numeric_limits<double>::infinity();  // +inf = flat
  std::vector<NamedSchedule> schedules;
};

/// Analytic risk curves (no simulation). Writes risk.csv and manifest.json;
/// each schedule adds a column holding the risk at that schedule's
/// temperature for the row's n.
void run_risk(const RiskArgs& args, const std::filesystem::path& out_dir);

}  // namespace temper
