#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "temper/divergences.hpp"
#include "temper/models.hpp"
#include "temper/selection.hpp"

namespace temper {

/// A metric/model pairing the harness cannot run.
struct IncompatibleConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Data-generating processes
// ---------------------------------------------------------------------------

struct NormalIID {
  NormalIID(double mean, double sd);
  double mean;
  double sd;
};

struct StudentTIID {
  StudentTIID(double df, double loc, double scale);
  double df;  // > 2 so the generator has finite variance
  double loc;
  double scale;
};

struct BernoulliIID {
  explicit BernoulliIID(double p);
  double p;
};

/// Covariates are standard p-variate normal; the response mixes a linear
/// signal with an outlier component of rate epsilon.
struct MixtureRegression {
  MixtureRegression(Eigen::VectorXd coef, double sigma, double outlier_rate,
                    double outlier_sd);
  Eigen::VectorXd coef;
  double sigma;
  double outlier_rate;
  double outlier_sd;
};

using TrueModel =
    std::variant<NormalIID, StudentTIID, BernoulliIID, MixtureRegression>;

Dataset generate(const TrueModel& tm, long n, RandomSource& rng);

/// The exact data-generating density as a kernel (iid generators).
DensityKernel true_predictive(const TrueModel& tm);

/// Conditional data density of the regression generator at a covariate vector.
NormalMixture true_predictive(const MixtureRegression& tm,
                              const Eigen::VectorXd& xnew);

// ---------------------------------------------------------------------------
// Replication experiments
// ---------------------------------------------------------------------------

enum class Metric { Tvd, Kl, Elpd };

struct ExperimentConfig {
  TrueModel true_model;
  ModelSpec model;
  std::vector<long> n_values;
  int replicates = 200;
  TempGrid grid = TempGrid::default_grid();
  Metric metric = Metric::Tvd;
  int mc_samples = 10000;  // regression outer Monte Carlo draws
  std::uint64_t root_seed = 1;
  bool scale_by_sqrt_n = false;
};

/// Rejects invalid counts and metric/model pairings the harness cannot run.
void validate(const ExperimentConfig& cfg);

struct ReplicateRow {
  long n;
  int replicate;
  double tau;
  double value;  // may be +/-infinity for degenerate scores
};

struct ReplicateTable {
  std::vector<ReplicateRow> rows;
};

/// One metric value per (n, replicate, grid temperature). Datasets come from
/// streams derived as (root_seed, replicate, n_index), so any thread count
/// produces bit-identical tables.
ReplicateTable run_replicates(const ExperimentConfig& cfg, int threads = 1);

struct SummaryPoint {
  long n;
  double tau;
  double mean;
  double q05;
  double q95;
  double degenerate_fraction;  // share of non-finite replicate values
};

struct SummaryCurve {
  std::vector<SummaryPoint> points;
  bool scaled = false;
};

/// Per-(n, tau) mean and 5%/95% quantiles (linear interpolation between order
/// statistics) over the finite replicate values, optionally sqrt(n)-scaled.
SummaryCurve summarize(const ReplicateTable& table, bool scale_by_sqrt_n);

struct FlatnessRow {
  long n;
  double spread;  // max - min of the mean curve over the temperature range
  double ratio;   // spread relative to the mean at the grid point nearest 1
};

struct FlatnessReport {
  std::vector<FlatnessRow> rows;
};

FlatnessReport flatness(const SummaryCurve& curve, double tau_lo, double tau_hi);

struct SelectionRow {
  long n;
  int replicate;
  double tau_star;
  double elpd_at_star;
  bool at_lower_boundary;
  bool at_upper_boundary;
};

/// One CV temperature selection per (n, replicate); requires metric Elpd.
std::vector<SelectionRow> tau_selection_histogram(const ExperimentConfig& cfg,
                                                  int threads = 1);

}  // namespace temper
