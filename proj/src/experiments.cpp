#include "temper/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "temper/parallel.hpp"

namespace temper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// R type-7 quantile: linear interpolation between order statistics.
double quantile_type7(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

struct MetricContext {
  const ExperimentConfig& cfg;
  DensityKernel true_kernel;  // univariate generators only
  bool univariate;
};

double univariate_metric(const MetricContext& ctx, const Dataset& data,
                         double tau) {
  if (ctx.cfg.metric == Metric::Elpd) {
    return elpd_loo(ctx.cfg.model, data, tau);
  }
  const DensityKernel pred = predictive(ctx.cfg.model, data, tau);
  if (ctx.cfg.metric == Metric::Tvd) {
    return tvd(ctx.true_kernel, pred);
  }
  // KL: closed form when both laws are normal, quadrature/sums otherwise.
  if (const Normal* tk = std::get_if<Normal>(&ctx.true_kernel)) {
    if (const Normal* pk = std::get_if<Normal>(&pred)) {
      return kl_normal(*tk, *pk);
    }
  }
  return kl(ctx.true_kernel, pred);
}

// Outer Monte Carlo average over shared covariate draws (common random
// numbers across the temperature grid).
void regression_metrics(const MetricContext& ctx, const RegressionData& data,
                        const Eigen::MatrixXd& xdraws, double* out) {
  const auto& spec = std::get<LinRegSpec>(ctx.cfg.model);
  const auto& tm = std::get<MixtureRegression>(ctx.cfg.true_model);
  const auto& grid = ctx.cfg.grid;
  const Dataset dataset(data);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (ctx.cfg.metric == Metric::Elpd) {
      out[g] = elpd_loo(ctx.cfg.model, dataset, grid[g]);
      continue;
    }
    const LinRegPosterior post = posterior_linreg(spec, data, grid[g]);
    double acc = 0.0;
    for (Eigen::Index s = 0; s < xdraws.rows(); ++s) {
      const Eigen::VectorXd x = xdraws.row(s).transpose();
      const Normal pred = predictive_linreg_at(spec, post, x);
      const DensityKernel truth(true_predictive(tm, x));
      if (ctx.cfg.metric == Metric::Tvd) {
        acc += tvd(truth, DensityKernel(pred));
      } else {
        acc += kl(truth, DensityKernel(pred));
      }
    }
    out[g] = acc / static_cast<double>(xdraws.rows());
  }
}

}  // namespace

NormalIID::NormalIID(double mean_, double sd_) : mean(mean_), sd(sd_) {
  if (!(sd > 0.0)) throw std::invalid_argument("NormalIID: sd must be positive");
}

StudentTIID::StudentTIID(double df_, double loc_, double scale_)
    : df(df_), loc(loc_), scale(scale_) {
  if (!(df > 2.0)) throw std::invalid_argument("StudentTIID: df must exceed 2");
  if (!(scale > 0.0)) {
    throw std::invalid_argument("StudentTIID: scale must be positive");
  }
}

BernoulliIID::BernoulliIID(double p_) : p(p_) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("BernoulliIID: p must lie in [0, 1]");
  }
}

MixtureRegression::MixtureRegression(Eigen::VectorXd coef_, double sigma_,
                                     double outlier_rate_, double outlier_sd_)
    : coef(std::move(coef_)),
      sigma(sigma_),
      outlier_rate(outlier_rate_),
      outlier_sd(outlier_sd_) {
  if (coef.size() < 1) {
    throw std::invalid_argument("MixtureRegression: need at least one coefficient");
  }
  if (!(sigma > 0.0) || !(outlier_sd > 0.0)) {
    throw std::invalid_argument("MixtureRegression: sds must be positive");
  }
  if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0)) {
    throw std::invalid_argument("MixtureRegression: outlier rate must lie in [0, 1]");
  }
}

Dataset generate(const TrueModel& tm, long n, RandomSource& rng) {
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  return std::visit(
      [n, &rng](const auto& gen) -> Dataset {
        using T = std::decay_t<decltype(gen)>;
        if constexpr (std::is_same_v<T, MixtureRegression>) {
          const Eigen::Index p = gen.coef.size();
          Eigen::MatrixXd X(n, p);
          Eigen::VectorXd y(n);
          for (long i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rng.normal();
            if (rng.bernoulli(gen.outlier_rate)) {
              y(i) = gen.outlier_sd * rng.normal();
            } else {
              y(i) = X.row(i).dot(gen.coef) + gen.sigma * rng.normal();
            }
          }
          return RegressionData(std::move(X), std::move(y));
        } else {
          std::vector<double> values(static_cast<std::size_t>(n));
          for (double& v : values) {
            if constexpr (std::is_same_v<T, NormalIID>) {
              v = gen.mean + gen.sd * rng.normal();
            } else if constexpr (std::is_same_v<T, StudentTIID>) {
              v = gen.loc + gen.scale * rng.student_t(gen.df);
            } else {
              v = rng.bernoulli(gen.p) ? 1.0 : 0.0;
            }
          }
          return UnivariateData(std::move(values));
        }
      },
      tm);
}

DensityKernel true_predictive(const TrueModel& tm) {
  return std::visit(
      [](const auto& gen) -> DensityKernel {
        using T = std::decay_t<decltype(gen)>;
        if constexpr (std::is_same_v<T, NormalIID>) {
          return Normal(gen.mean, gen.sd);
        } else if constexpr (std::is_same_v<T, StudentTIID>) {
          return StudentT(gen.df, gen.loc, gen.scale);
        } else if constexpr (std::is_same_v<T, BernoulliIID>) {
          return Bernoulli(gen.p);
        } else {
          throw std::invalid_argument(
              "true_predictive: regression needs a covariate vector");
        }
      },
      tm);
}

NormalMixture true_predictive(const MixtureRegression& tm,
                              const Eigen::VectorXd& xnew) {
  if (xnew.size() != tm.coef.size()) {
    throw std::invalid_argument("true_predictive: covariate dimension mismatch");
  }
  return NormalMixture(
      {1.0 - tm.outlier_rate, tm.outlier_rate},
      {Normal(xnew.dot(tm.coef), tm.sigma), Normal(0.0, tm.outlier_sd)});
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.replicates < 1) {
    throw std::invalid_argument("config: replicates must be >= 1");
  }
  if (cfg.mc_samples < 1) {
    throw std::invalid_argument("config: mc_samples must be >= 1");
  }
  if (cfg.n_values.empty()) {
    throw std::invalid_argument("config: n_values must be nonempty");
  }
  for (long n : cfg.n_values) {
    if (n < 1) throw std::invalid_argument("config: n values must be >= 1");
  }

  const bool regression_model = std::holds_alternative<LinRegSpec>(cfg.model);
  const bool regression_truth =
      std::holds_alternative<MixtureRegression>(cfg.true_model);
  if (regression_model != regression_truth) {
    throw IncompatibleConfigError(
        "config: regression generator and model must be paired");
  }
  if (std::holds_alternative<BernoulliIID>(cfg.true_model) &&
      !std::holds_alternative<BetaBernoulliSpec>(cfg.model)) {
    throw IncompatibleConfigError(
        "config: Bernoulli data requires the beta-Bernoulli model");
  }
  if (std::holds_alternative<BetaBernoulliSpec>(cfg.model) &&
      !std::holds_alternative<BernoulliIID>(cfg.true_model)) {
    throw IncompatibleConfigError(
        "config: the beta-Bernoulli model requires Bernoulli data");
  }
  if (regression_model) {
    const auto& spec = std::get<LinRegSpec>(cfg.model);
    const auto& tm = std::get<MixtureRegression>(cfg.true_model);
    if (spec.prior_cov.rows() != tm.coef.size()) {
      throw IncompatibleConfigError(
          "config: prior covariance and generator coefficients disagree on p");
    }
  }

  const long n_min = *std::min_element(cfg.n_values.begin(), cfg.n_values.end());
  if (cfg.metric == Metric::Elpd) {
    if (regression_model) {
      const auto& spec = std::get<LinRegSpec>(cfg.model);
      if (n_min < spec.prior_cov.rows() + 1) {
        throw IncompatibleConfigError("config: elpd needs n >= p + 1");
      }
    } else if (n_min < 2) {
      throw IncompatibleConfigError("config: elpd needs n >= 2");
    }
  }
}

ReplicateTable run_replicates(const ExperimentConfig& cfg, int threads) {
  validate(cfg);
  const std::size_t n_count = cfg.n_values.size();
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  const std::size_t grid_size = cfg.grid.size();

  const bool univariate = !std::holds_alternative<LinRegSpec>(cfg.model);
  MetricContext ctx{cfg,
                    univariate ? true_predictive(cfg.true_model)
                               : DensityKernel(Normal(0.0, 1.0)),
                    univariate};

  ReplicateTable table;
  table.rows.resize(n_count * reps * grid_size);
  const RandomSource root(cfg.root_seed);

  parallel_for(n_count * reps, threads, [&](std::size_t item) {
    const std::size_t ni = item / reps;
    const std::size_t rep = item % reps;
    const long n = cfg.n_values[ni];
    RandomSource data_rng = root.derive(rep).derive(ni);
    const Dataset data = generate(cfg.true_model, n, data_rng);

    std::vector<double> values(grid_size);
    if (ctx.univariate) {
      for (std::size_t g = 0; g < grid_size; ++g) {
        values[g] = univariate_metric(ctx, data, cfg.grid[g]);
      }
    } else {
      const Eigen::Index p =
          std::get<LinRegSpec>(cfg.model).prior_cov.rows();
      Eigen::MatrixXd xdraws(0, p);
      if (cfg.metric != Metric::Elpd) {
        RandomSource pred_rng = root.derive("predictor").derive(rep);
        xdraws.resize(cfg.mc_samples, p);
        for (Eigen::Index s = 0; s < xdraws.rows(); ++s) {
          for (Eigen::Index j = 0; j < p; ++j) xdraws(s, j) = pred_rng.normal();
        }
      }
      regression_metrics(ctx, std::get<RegressionData>(data), xdraws,
                         values.data());
    }

    ReplicateRow* out = table.rows.data() + (ni * reps + rep) * grid_size;
    for (std::size_t g = 0; g < grid_size; ++g) {
      out[g] = ReplicateRow{n, static_cast<int>(rep), cfg.grid[g], values[g]};
    }
  });
  return table;
}

SummaryCurve summarize(const ReplicateTable& table, bool scale_by_sqrt_n) {
  if (table.rows.empty()) {
    throw std::invalid_argument("summarize: table is empty");
  }
  // Group by (n, tau), keeping first-seen order.
  std::map<std::pair<long, double>, std::size_t> index;
  std::vector<std::pair<long, double>> keys;
  std::vector<std::vector<double>> buckets;
  std::vector<std::size_t> totals;
  for (const ReplicateRow& row : table.rows) {
    const auto key = std::make_pair(row.n, row.tau);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, keys.size()).first;
      keys.push_back(key);
      buckets.emplace_back();
      totals.push_back(0);
    }
    ++totals[it->second];
    if (std::isfinite(row.value)) buckets[it->second].push_back(row.value);
  }

  SummaryCurve curve;
  curve.scaled = scale_by_sqrt_n;
  curve.points.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::vector<double>& vals = buckets[k];
    SummaryPoint pt;
    pt.n = keys[k].first;
    pt.tau = keys[k].second;
    pt.degenerate_fraction =
        1.0 - static_cast<double>(vals.size()) / static_cast<double>(totals[k]);
    if (vals.empty()) {
      pt.mean = pt.q05 = pt.q95 = std::numeric_limits<double>::quiet_NaN();
    } else {
      std::sort(vals.begin(), vals.end());
      double sum = 0.0;
      for (double v : vals) sum += v;
      pt.mean = sum / static_cast<double>(vals.size());
      pt.q05 = quantile_type7(vals, 0.05);
      pt.q95 = quantile_type7(vals, 0.95);
    }
    if (scale_by_sqrt_n) {
      const double s = std::sqrt(static_cast<double>(pt.n));
      pt.mean *= s;
      pt.q05 *= s;
      pt.q95 *= s;
    }
    curve.points.push_back(pt);
  }
  return curve;
}

FlatnessReport flatness(const SummaryCurve& curve, double tau_lo, double tau_hi) {
  if (!(tau_lo < tau_hi)) {
    throw std::invalid_argument("flatness: need tau_lo < tau_hi");
  }
  std::vector<long> order;
  std::map<long, std::vector<const SummaryPoint*>> by_n;
  for (const SummaryPoint& pt : curve.points) {
    if (by_n.find(pt.n) == by_n.end()) order.push_back(pt.n);
    by_n[pt.n].push_back(&pt);
  }

  FlatnessReport report;
  for (long n : order) {
    const auto& pts = by_n[n];
    double lo = kInf, hi = -kInf;
    std::size_t inside = 0;
    double ref = std::numeric_limits<double>::quiet_NaN();
    double ref_dist = kInf;
    for (const SummaryPoint* pt : pts) {
      const double d = std::fabs(pt->tau - 1.0);
      if (d < ref_dist) {
        ref_dist = d;
        ref = pt->mean;
      }
      if (pt->tau >= tau_lo && pt->tau <= tau_hi) {
        ++inside;
        lo = std::min(lo, pt->mean);
        hi = std::max(hi, pt->mean);
      }
    }
    if (inside < 2) {
      throw std::invalid_argument(
          "flatness: temperature range covers fewer than two grid points");
    }
    const double spread = hi - lo;
    report.rows.push_back(
        FlatnessRow{n, spread, spread == 0.0 ? 0.0 : spread / ref});
  }
  return report;
}

std::vector<SelectionRow> tau_selection_histogram(const ExperimentConfig& cfg,
                                                  int threads) {
  validate(cfg);
  if (cfg.metric != Metric::Elpd) {
    throw IncompatibleConfigError("tau_selection_histogram: metric must be elpd");
  }
  const std::size_t n_count = cfg.n_values.size();
  const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
  std::vector<SelectionRow> rows(n_count * reps);
  const RandomSource root(cfg.root_seed);

  parallel_for(n_count * reps, threads, [&](std::size_t item) {
    const std::size_t ni = item / reps;
    const std::size_t rep = item % reps;
    RandomSource data_rng = root.derive(rep).derive(ni);
    const Dataset data = generate(cfg.true_model, cfg.n_values[ni], data_rng);
    const TauSelection sel = select_tau_cv(cfg.model, data, cfg.grid);
    rows[item] = SelectionRow{cfg.n_values[ni], static_cast<int>(rep),
                              sel.tau_star,      sel.elpd_at_star,
                              sel.at_lower_boundary, sel.at_upper_boundary};
  });
  return rows;
}

}  // namespace temper
