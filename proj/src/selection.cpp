#include "temper/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace temper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double elpd_loo_normal_location(const NormalLocationSpec& spec,
                                const UnivariateData& data, double tau) {
  const std::size_t n = data.values.size();
  if (n < 2) {
    throw std::invalid_argument("elpd_loo: need at least two observations");
  }
  // One reusable holder for the deleted dataset; each fold sees exactly the
  // data with observation i removed, so fold scores match
  // loo_predictive_normal_location bit for bit.
  UnivariateData held_in(std::vector<double>(n - 1));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(data.values.begin(), data.values.begin() + i,
              held_in.values.begin());
    std::copy(data.values.begin() + i + 1, data.values.end(),
              held_in.values.begin() + i);
    const Normal pred = predictive_normal_location(spec, held_in, tau);
    sum += log_density(DensityKernel(pred), data.values[i]);
  }
  return sum / static_cast<double>(n);
}

double elpd_loo_beta_bernoulli(const BetaBernoulliSpec& spec,
                               const UnivariateData& data, double tau) {
  const std::size_t n = data.values.size();
  if (n < 2) {
    throw std::invalid_argument("elpd_loo: need at least two observations");
  }
  UnivariateData held_in(std::vector<double>(n - 1));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(data.values.begin(), data.values.begin() + i,
              held_in.values.begin());
    std::copy(data.values.begin() + i + 1, data.values.end(),
              held_in.values.begin() + i);
    const BetaBinomial pred = predictive_beta_bernoulli(spec, held_in, tau);
    sum += log_density(DensityKernel(pred), data.values[i]);
  }
  return sum / static_cast<double>(n);
}

double elpd_loo_linreg(const LinRegSpec& spec, const RegressionData& data,
                       double tau) {
  const std::size_t n = static_cast<std::size_t>(data.X.rows());
  const std::size_t p = static_cast<std::size_t>(data.X.cols());
  if (n < p + 1) {
    throw std::invalid_argument("elpd_loo: regression needs n >= p + 1");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Normal pred = loo_predictive_linreg(spec, data, tau, i);
    sum += log_density(DensityKernel(pred),
                       data.y(static_cast<Eigen::Index>(i)));
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TempGrid::TempGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("TempGrid: need at least two points");
  }
  double prev = 0.0;
  for (double t : points_) {
    if (!(t > prev) || !std::isfinite(t)) {
      throw std::invalid_argument(
          "TempGrid: points must be positive and strictly increasing");
    }
    prev = t;
  }
}

TempGrid TempGrid::log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("TempGrid: invalid log-spaced arguments");
  }
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    pts[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * (static_cast<double>(i) / (count - 1)));
  }
  // Pin the endpoints so a grid echoed as (lo, hi, count) rebuilds exactly.
  pts.front() = lo;
  pts.back() = hi;
  return TempGrid(std::move(pts));
}

TempGrid TempGrid::default_grid() { return log_spaced(0.01, 100.0, 61); }

TempSchedule make_fixed_schedule(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("FixedSchedule: tau must be positive");
  return FixedSchedule{tau};
}

TempSchedule make_power_decay_schedule(double c, double gamma) {
  if (!(c > 0.0) || !(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument(
        "PowerDecaySchedule: need c > 0 and gamma in (0, 1)");
  }
  return PowerDecaySchedule{c, gamma};
}

TempSchedule make_coarsened_schedule(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("CoarsenedSchedule: alpha must be positive");
  }
  return CoarsenedSchedule{alpha};
}

double schedule_tau(const TempSchedule& s, long n) {
  if (n < 1) throw std::invalid_argument("schedule_tau: n must be >= 1");
  return std::visit(
      [n](const auto& sched) -> double {
        using T = std::decay_t<decltype(sched)>;
        const double nd = static_cast<double>(n);
        if constexpr (std::is_same_v<T, FixedSchedule>) {
          return sched.tau;
        } else if constexpr (std::is_same_v<T, PowerDecaySchedule>) {
          return sched.c * std::pow(nd, -sched.gamma);
        } else {
          return sched.alpha / (sched.alpha + nd);
        }
      },
      s);
}

double elpd_loo(const ModelSpec& model, const Dataset& data, double tau) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, NormalLocationSpec>) {
          return elpd_loo_normal_location(spec, std::get<UnivariateData>(data), tau);
        } else if constexpr (std::is_same_v<T, BetaBernoulliSpec>) {
          return elpd_loo_beta_bernoulli(spec, std::get<UnivariateData>(data), tau);
        } else {
          return elpd_loo_linreg(spec, std::get<RegressionData>(data), tau);
        }
      },
      model);
}

TauSelection select_from_scores(const TempGrid& grid,
                                std::span<const double> scores) {
  if (scores.size() != grid.size()) {
    throw std::invalid_argument("select_from_scores: score/grid size mismatch");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  if (scores[best] == -kInf) {
    return TauSelection{grid[0], -kInf, false, false};
  }
  return TauSelection{grid[best], scores[best], best == 0,
                      best == grid.size() - 1};
}

TauSelection select_tau_cv(const ModelSpec& model, const Dataset& data,
                           const TempGrid& grid) {
  std::vector<double> scores(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    scores[i] = elpd_loo(model, data, grid[i]);
  }
  return select_from_scores(grid, scores);
}

double risk_normal(long n, double tau, double sigma0_sq) {
  if (n < 1) throw std::invalid_argument("risk_normal: n must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("risk_normal: tau must be positive");
  if (!(sigma0_sq > 0.0)) {
    throw std::invalid_argument("risk_normal: prior variance must be positive");
  }
  const double prec0 = std::isinf(sigma0_sq) ? 0.0 : 1.0 / sigma0_sq;
  const double s2 = 1.0 / (static_cast<double>(n) * tau + prec0);
  return 0.5 * std::log1p(s2) + (1.0 + tau * s2) / (2.0 * (1.0 + s2)) - 0.5;
}

double risk_normal_flat(long n, double tau) {
  if (n < 1) throw std::invalid_argument("risk_normal_flat: n must be >= 1");
  if (!(tau > 0.0)) {
    throw std::invalid_argument("risk_normal_flat: tau must be positive");
  }
  const double nd = static_cast<double>(n);
  const double nt_inv = 1.0 / (nd * tau);
  return 0.5 * std::log1p(nt_inv) +
         (1.0 + 1.0 / nd) / (2.0 * (1.0 + nt_inv)) - 0.5;
}

double risk_derivative_normal_flat(long n, double tau) {
  if (n < 1) throw std::invalid_argument("risk_derivative_normal_flat: n must be >= 1");
  if (!(tau > 0.0)) {
    throw std::invalid_argument("risk_derivative_normal_flat: tau must be positive");
  }
  const double nd = static_cast<double>(n);
  const double ninv = 1.0 / nd;
  const double denom = tau * (tau + ninv) * (tau + ninv);
  return (1.0 / (2.0 * nd)) * ((tau - 1.0) * ninv) / denom;
}

}  // namespace temper
