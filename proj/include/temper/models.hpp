#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "temper/dists.hpp"

namespace temper {

/// Thrown when a regression design is too ill-conditioned to factor reliably.
struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Model specifications (immutable once constructed)
// ---------------------------------------------------------------------------

/// Normal likelihood with known sd and a normal (or flat) prior on the mean.
struct NormalLocationSpec {
  NormalLocationSpec(double sigma, double prior_mean, double prior_var);
  /// Flat prior: precision zero rather than a huge finite variance.
  static NormalLocationSpec flat(double sigma);

  bool has_flat_prior() const;
  double prior_precision() const;

  double sigma;       // likelihood sd
  double prior_mean;  // ignored under a flat prior
  double prior_var;   // +infinity encodes the flat prior
};

struct BetaBernoulliSpec {
  BetaBernoulliSpec(double prior_a, double prior_b);
  double prior_a;
  double prior_b;
};

struct LinRegSpec {
  LinRegSpec(double noise_sd, Eigen::MatrixXd prior_cov);
  double noise_sd;
  Eigen::MatrixXd prior_cov;  // symmetric positive definite
};

using ModelSpec = std::variant<NormalLocationSpec, BetaBernoulliSpec, LinRegSpec>;

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

struct UnivariateData {
  explicit UnivariateData(std::vector<double> values);
  std::vector<double> values;
};

struct RegressionData {
  RegressionData(Eigen::MatrixXd X, Eigen::VectorXd y);
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

using Dataset = std::variant<UnivariateData, RegressionData>;

// ---------------------------------------------------------------------------
// Posterior summaries
// ---------------------------------------------------------------------------

struct NormalLocationPosterior {
  double mean;
  double var;
};

struct BetaBernoulliPosterior {
  double a;
  double b;
};

struct LinRegPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

using PosteriorSummary =
    std::variant<NormalLocationPosterior, BetaBernoulliPosterior, LinRegPosterior>;

// ---------------------------------------------------------------------------
// Tempered inference, normal location
// ---------------------------------------------------------------------------

NormalLocationPosterior posterior_normal_location(const NormalLocationSpec& spec,
                                                  const UnivariateData& data,
                                                  double tau);

Normal predictive_normal_location(const NormalLocationSpec& spec,
                                  const UnivariateData& data, double tau);

/// Leave-one-out predictive: exactly the full pipeline run on the dataset
/// with observation i deleted.
Normal loo_predictive_normal_location(const NormalLocationSpec& spec,
                                      const UnivariateData& data, double tau,
                                      std::size_t i);

// ---------------------------------------------------------------------------
// Tempered inference, beta-Bernoulli
// ---------------------------------------------------------------------------

BetaBernoulliPosterior posterior_beta_bernoulli(const BetaBernoulliSpec& spec,
                                                const UnivariateData& data,
                                                double tau);

BetaBinomial predictive_beta_bernoulli(const BetaBernoulliSpec& spec,
                                       const UnivariateData& data, double tau);

BetaBinomial loo_predictive_beta_bernoulli(const BetaBernoulliSpec& spec,
                                           const UnivariateData& data,
                                           double tau, std::size_t i);

// ---------------------------------------------------------------------------
// Tempered inference, linear regression
// ---------------------------------------------------------------------------

LinRegPosterior posterior_linreg(const LinRegSpec& spec,
                                 const RegressionData& data, double tau);

/// Predictive law at a new covariate vector, from an already-computed
/// posterior. predictive_linreg composes posterior_linreg with this.
Normal predictive_linreg_at(const LinRegSpec& spec, const LinRegPosterior& post,
                            const Eigen::VectorXd& xnew);

Normal predictive_linreg(const LinRegSpec& spec, const RegressionData& data,
                         double tau, const Eigen::VectorXd& xnew);

Normal loo_predictive_linreg(const LinRegSpec& spec, const RegressionData& data,
                             double tau, std::size_t i);

// ---------------------------------------------------------------------------
// Limit predictives
// ---------------------------------------------------------------------------

/// Plug-in predictive at the maximum-likelihood point estimate. The
/// beta-Bernoulli variant may be degenerate (all mass on one atom).
Normal plug_in_predictive(const NormalLocationSpec& spec,
                          const UnivariateData& data);
Bernoulli plug_in_predictive(const BetaBernoulliSpec& spec,
                             const UnivariateData& data);
Normal plug_in_predictive(const LinRegSpec& spec, const RegressionData& data,
                          const Eigen::VectorXd& xnew);

/// Prior predictive; rejects improper (flat) priors.
Normal prior_predictive(const NormalLocationSpec& spec);
BetaBinomial prior_predictive(const BetaBernoulliSpec& spec);
Normal prior_predictive(const LinRegSpec& spec, const Eigen::VectorXd& xnew);

// ---------------------------------------------------------------------------
// Concentration probe
// ---------------------------------------------------------------------------

/// Posterior probability of {theta : |theta - center| > radius}.
double posterior_mass_outside(const NormalLocationSpec& spec,
                              const UnivariateData& data, double tau,
                              double center, double radius);
double posterior_mass_outside(const BetaBernoulliSpec& spec,
                              const UnivariateData& data, double tau,
                              double center, double radius);

// ---------------------------------------------------------------------------
// Generic dispatch helpers
// ---------------------------------------------------------------------------

/// Posterior predictive for a univariate model spec (regression needs a
/// covariate vector and is handled by the experiment harness).
DensityKernel predictive(const ModelSpec& model, const Dataset& data,
                         double tau);

std::size_t dataset_size(const Dataset& data);

}  // namespace temper
