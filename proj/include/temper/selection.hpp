#pragma once

#include <span>
#include <variant>
#include <vector>

#include "temper/models.hpp"

namespace temper {

/// Strictly increasing grid of positive temperatures.
class TempGrid {
 public:
  explicit TempGrid(std::vector<double> points);
  static TempGrid log_spaced(double lo, double hi, int count);
  /// 61 log-spaced points on [0.01, 100].
  static TempGrid default_grid();

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<double> points_;
};

/// Temperature as a function of sample size.
struct FixedSchedule {
  double tau;
};
struct PowerDecaySchedule {
  double c;
  double gamma;  // in (0, 1) so that n * tau_n diverges
};
struct CoarsenedSchedule {
  double alpha;  // tau_n = alpha / (alpha + n)
};
using TempSchedule =
    std::variant<FixedSchedule, PowerDecaySchedule, CoarsenedSchedule>;

TempSchedule make_fixed_schedule(double tau);
TempSchedule make_power_decay_schedule(double c, double gamma);
TempSchedule make_coarsened_schedule(double alpha);

double schedule_tau(const TempSchedule& s, long n);

/// Result of grid-argmax temperature selection. tau_star is always a grid
/// point; boundary flags record argmax at an endpoint (the finite-grid
/// stand-ins for selecting the prior or plug-in predictive).
struct TauSelection {
  double tau_star;
  double elpd_at_star;  // may be -infinity
  bool at_lower_boundary;
  bool at_upper_boundary;
};

/// Leave-one-out cross-validation expected log predictive density at a single
/// temperature: (1/n) * sum_i log p(y_i | y_{-i}, tau). -infinity if any fold
/// scores a zero-mass point.
double elpd_loo(const ModelSpec& model, const Dataset& data, double tau);

/// Argmax of precomputed scores over the grid; ties break toward the smallest
/// temperature, and -infinity participates as the smallest element. If every
/// score is -infinity the selection reports the smallest grid point with both
/// boundary flags clear.
TauSelection select_from_scores(const TempGrid& grid,
                                std::span<const double> scores);

TauSelection select_tau_cv(const ModelSpec& model, const Dataset& data,
                           const TempGrid& grid);

/// Analytic KL risk of the tempered normal-location predictive under the
/// standard setup (true mean 0, unit sds, prior mean 0). sigma0_sq may be
/// +infinity for the flat prior.
double risk_normal(long n, double tau, double sigma0_sq);

/// Flat-prior specialization.
double risk_normal_flat(long n, double tau);

/// d/dtau of risk_normal_flat: negative below tau = 1, zero at 1, positive above.
double risk_derivative_normal_flat(long n, double tau);

}  // namespace temper
