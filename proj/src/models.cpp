#include "temper/models.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "temper/special.hpp"

namespace temper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("temperature must be finite and positive");
  }
}

double sample_mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Successes in a {0,1}-valued dataset; rejects anything non-binary.
long count_successes(const std::vector<double>& v) {
  long x = 0;
  for (double y : v) {
    if (y == 1.0) {
      ++x;
    } else if (y != 0.0) {
      throw std::invalid_argument("beta-Bernoulli data must be 0/1 valued");
    }
  }
  return x;
}

std::vector<double> erase_at(const std::vector<double>& v, std::size_t i) {
  std::vector<double> out;
  out.reserve(v.size() - 1);
  out.insert(out.end(), v.begin(), v.begin() + i);
  out.insert(out.end(), v.begin() + i + 1, v.end());
  return out;
}

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw std::out_of_range("observation index out of range");
  if (n < 2) {
    throw std::invalid_argument("leave-one-out needs at least two observations");
  }
}

// Cholesky with a reciprocal-condition guard at sqrt(machine epsilon).
Eigen::LLT<Eigen::MatrixXd> guarded_llt(const Eigen::MatrixXd& m,
                                        const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError(std::string(what) +
                              ": matrix is not positive definite");
  }
  const double rcond_floor =
      std::sqrt(std::numeric_limits<double>::epsilon());
  if (llt.rcond() < rcond_floor) {
    throw IllConditionedError(std::string(what) +
                              ": matrix is numerically ill-conditioned");
  }
  return llt;
}

}  // namespace

// --- specs ------------------------------------------------------------------

NormalLocationSpec::NormalLocationSpec(double sigma_, double prior_mean_,
                                       double prior_var_)
    : sigma(sigma_), prior_mean(prior_mean_), prior_var(prior_var_) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("NormalLocationSpec: sigma must be positive");
  }
  if (!(prior_var > 0.0)) {
    throw std::invalid_argument("NormalLocationSpec: prior variance must be positive");
  }
}

NormalLocationSpec NormalLocationSpec::flat(double sigma) {
  return NormalLocationSpec(sigma, 0.0, kInf);
}

bool NormalLocationSpec::has_flat_prior() const { return std::isinf(prior_var); }

double NormalLocationSpec::prior_precision() const {
  return has_flat_prior() ? 0.0 : 1.0 / prior_var;
}

BetaBernoulliSpec::BetaBernoulliSpec(double prior_a_, double prior_b_)
    : prior_a(prior_a_), prior_b(prior_b_) {
  if (!(prior_a > 0.0) || !(prior_b > 0.0)) {
    throw std::invalid_argument("BetaBernoulliSpec: prior shapes must be positive");
  }
}

LinRegSpec::LinRegSpec(double noise_sd_, Eigen::MatrixXd prior_cov_)
    : noise_sd(noise_sd_), prior_cov(std::move(prior_cov_)) {
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd)) {
    throw std::invalid_argument("LinRegSpec: noise sd must be positive");
  }
  if (prior_cov.rows() != prior_cov.cols() || prior_cov.rows() < 1) {
    throw std::invalid_argument("LinRegSpec: prior covariance must be square");
  }
  if ((prior_cov - prior_cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("LinRegSpec: prior covariance must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(prior_cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "LinRegSpec: prior covariance must be positive definite");
  }
}

// --- datasets ----------------------------------------------------------------

UnivariateData::UnivariateData(std::vector<double> values_)
    : values(std::move(values_)) {
  if (values.empty()) {
    throw std::invalid_argument("UnivariateData: need at least one observation");
  }
}

RegressionData::RegressionData(Eigen::MatrixXd X_, Eigen::VectorXd y_)
    : X(std::move(X_)), y(std::move(y_)) {
  if (X.rows() < 1 || X.rows() != y.size()) {
    throw std::invalid_argument("RegressionData: row count must match y length");
  }
}

// --- normal location ----------------------------------------------------------

NormalLocationPosterior posterior_normal_location(const NormalLocationSpec& spec,
                                                  const UnivariateData& data,
                                                  double tau) {
  require_positive_tau(tau);
  const double n = static_cast<double>(data.values.size());
  const double ybar = sample_mean(data.values);
  const double sig2 = spec.sigma * spec.sigma;
  const double prec0 = spec.prior_precision();
  const double var = 1.0 / (n * tau / sig2 + prec0);
  const double mean = var * (prec0 * spec.prior_mean + n * tau * ybar / sig2);
  return {mean, var};
}

Normal predictive_normal_location(const NormalLocationSpec& spec,
                                  const UnivariateData& data, double tau) {
  const NormalLocationPosterior post = posterior_normal_location(spec, data, tau);
  return Normal(post.mean, std::sqrt(spec.sigma * spec.sigma + post.var));
}

Normal loo_predictive_normal_location(const NormalLocationSpec& spec,
                                      const UnivariateData& data, double tau,
                                      std::size_t i) {
  check_index(i, data.values.size());
  const UnivariateData held_in(erase_at(data.values, i));
  return predictive_normal_location(spec, held_in, tau);
}

// --- beta-Bernoulli -------------------------------------------------------------

BetaBernoulliPosterior posterior_beta_bernoulli(const BetaBernoulliSpec& spec,
                                                const UnivariateData& data,
                                                double tau) {
  require_positive_tau(tau);
  const long x = count_successes(data.values);
  const long z = static_cast<long>(data.values.size()) - x;
  return {tau * static_cast<double>(x) + spec.prior_a,
          tau * static_cast<double>(z) + spec.prior_b};
}

BetaBinomial predictive_beta_bernoulli(const BetaBernoulliSpec& spec,
                                       const UnivariateData& data, double tau) {
  const BetaBernoulliPosterior post = posterior_beta_bernoulli(spec, data, tau);
  return BetaBinomial(1, post.a, post.b);
}

BetaBinomial loo_predictive_beta_bernoulli(const BetaBernoulliSpec& spec,
                                           const UnivariateData& data,
                                           double tau, std::size_t i) {
  check_index(i, data.values.size());
  const UnivariateData held_in(erase_at(data.values, i));
  return predictive_beta_bernoulli(spec, held_in, tau);
}

// --- linear regression -----------------------------------------------------------

LinRegPosterior posterior_linreg(const LinRegSpec& spec,
                                 const RegressionData& data, double tau) {
  require_positive_tau(tau);
  const Eigen::Index p = spec.prior_cov.rows();
  if (data.X.cols() != p) {
    throw std::invalid_argument("posterior_linreg: design/prior dimension mismatch");
  }
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd prior_prec = guarded_llt(spec.prior_cov, "prior covariance").solve(eye);
  const double w = tau / (spec.noise_sd * spec.noise_sd);
  const Eigen::MatrixXd post_prec =
      w * (data.X.transpose() * data.X) + prior_prec;
  const auto llt = guarded_llt(post_prec, "posterior precision");
  LinRegPosterior post;
  post.mean = llt.solve(w * (data.X.transpose() * data.y));
  post.cov = llt.solve(eye);
  return post;
}

Normal predictive_linreg_at(const LinRegSpec& spec, const LinRegPosterior& post,
                            const Eigen::VectorXd& xnew) {
  if (xnew.size() != post.mean.size()) {
    throw std::invalid_argument("predictive_linreg: covariate dimension mismatch");
  }
  const double mean = post.mean.dot(xnew);
  const double var = xnew.dot(post.cov * xnew) + spec.noise_sd * spec.noise_sd;
  return Normal(mean, std::sqrt(var));
}

Normal predictive_linreg(const LinRegSpec& spec, const RegressionData& data,
                         double tau, const Eigen::VectorXd& xnew) {
  return predictive_linreg_at(spec, posterior_linreg(spec, data, tau), xnew);
}

Normal loo_predictive_linreg(const LinRegSpec& spec, const RegressionData& data,
                             double tau, std::size_t i) {
  const std::size_t n = static_cast<std::size_t>(data.X.rows());
  check_index(i, n);
  const Eigen::Index p = data.X.cols();
  Eigen::MatrixXd X(n - 1, p);
  Eigen::VectorXd y(n - 1);
  const Eigen::Index ii = static_cast<Eigen::Index>(i);
  X.topRows(ii) = data.X.topRows(ii);
  X.bottomRows(X.rows() - ii) = data.X.bottomRows(X.rows() - ii);
  y.head(ii) = data.y.head(ii);
  y.tail(y.size() - ii) = data.y.tail(y.size() - ii);
  const RegressionData held_in(std::move(X), std::move(y));
  return predictive_linreg(spec, held_in, tau, data.X.row(ii).transpose());
}

// --- limit predictives -------------------------------------------------------------

Normal plug_in_predictive(const NormalLocationSpec& spec,
                          const UnivariateData& data) {
  return Normal(sample_mean(data.values), spec.sigma);
}

Bernoulli plug_in_predictive(const BetaBernoulliSpec&,
                             const UnivariateData& data) {
  const long x = count_successes(data.values);
  return Bernoulli(static_cast<double>(x) /
                   static_cast<double>(data.values.size()));
}

Normal plug_in_predictive(const LinRegSpec& spec, const RegressionData& data,
                          const Eigen::VectorXd& xnew) {
  const Eigen::MatrixXd gram = data.X.transpose() * data.X;
  const auto llt = guarded_llt(gram, "least-squares Gram matrix");
  const Eigen::VectorXd beta_hat = llt.solve(data.X.transpose() * data.y);
  if (xnew.size() != beta_hat.size()) {
    throw std::invalid_argument("plug_in_predictive: covariate dimension mismatch");
  }
  return Normal(beta_hat.dot(xnew), spec.noise_sd);
}

Normal prior_predictive(const NormalLocationSpec& spec) {
  if (spec.has_flat_prior()) {
    throw std::invalid_argument("prior_predictive: flat prior is improper");
  }
  return Normal(spec.prior_mean,
                std::sqrt(spec.sigma * spec.sigma + spec.prior_var));
}

BetaBinomial prior_predictive(const BetaBernoulliSpec& spec) {
  return BetaBinomial(1, spec.prior_a, spec.prior_b);
}

Normal prior_predictive(const LinRegSpec& spec, const Eigen::VectorXd& xnew) {
  if (xnew.size() != spec.prior_cov.rows()) {
    throw std::invalid_argument("prior_predictive: covariate dimension mismatch");
  }
  const double var =
      xnew.dot(spec.prior_cov * xnew) + spec.noise_sd * spec.noise_sd;
  return Normal(0.0, std::sqrt(var));
}

// --- concentration probe --------------------------------------------------------------

namespace {
void require_positive_radius(double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("posterior_mass_outside: radius must be positive");
  }
}
}  // namespace

double posterior_mass_outside(const NormalLocationSpec& spec,
                              const UnivariateData& data, double tau,
                              double center, double radius) {
  require_positive_radius(radius);
  const NormalLocationPosterior post = posterior_normal_location(spec, data, tau);
  const double sd = std::sqrt(post.var);
  const double below = special::normal_cdf((center - radius - post.mean) / sd);
  const double above =
      1.0 - special::normal_cdf((center + radius - post.mean) / sd);
  return std::clamp(below + above, 0.0, 1.0);
}

double posterior_mass_outside(const BetaBernoulliSpec& spec,
                              const UnivariateData& data, double tau,
                              double center, double radius) {
  require_positive_radius(radius);
  const BetaBernoulliPosterior post = posterior_beta_bernoulli(spec, data, tau);
  const double lo = center - radius;
  const double hi = center + radius;
  double below = 0.0;
  if (lo >= 1.0) {
    below = 1.0;
  } else if (lo > 0.0) {
    below = special::reg_inc_beta(post.a, post.b, lo);
  }
  double above = 0.0;
  if (hi <= 0.0) {
    above = 1.0;
  } else if (hi < 1.0) {
    above = 1.0 - special::reg_inc_beta(post.a, post.b, hi);
  }
  return std::clamp(below + above, 0.0, 1.0);
}

// --- generic dispatch --------------------------------------------------------------

DensityKernel predictive(const ModelSpec& model, const Dataset& data, double tau) {
  return std::visit(
      [&](const auto& spec) -> DensityKernel {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, NormalLocationSpec>) {
          return predictive_normal_location(spec, std::get<UnivariateData>(data),
                                            tau);
        } else if constexpr (std::is_same_v<T, BetaBernoulliSpec>) {
          return predictive_beta_bernoulli(spec, std::get<UnivariateData>(data),
                                           tau);
        } else {
          throw std::invalid_argument(
              "predictive: regression needs a covariate vector");
        }
      },
      model);
}

std::size_t dataset_size(const Dataset& data) {
  return std::visit(
      [](const auto& d) -> std::size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnivariateData>) {
          return d.values.size();
        } else {
          return static_cast<std::size_t>(d.X.rows());
        }
      },
      data);
}

}  // namespace temper
