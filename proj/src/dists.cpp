#include "temper/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "temper/special.hpp"

namespace temper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

// Exact integer point of a discrete observation, or -1 if x is not integral.
int as_point(double x) {
  const double r = std::nearbyint(x);
  if (x != r) return -1;
  return static_cast<int>(r);
}

double normal_log_density(const Normal& k, double x) {
  const double z = (x - k.mean) / k.sd;
  return -0.5 * z * z - std::log(k.sd) - 0.5 * kLogTwoPi;
}

double normal_density(const Normal& k, double x) {
  const double z = (x - k.mean) / k.sd;
  return kInvSqrtTwoPi / k.sd * std::exp(-0.5 * z * z);
}

double beta_binomial_log_mass(const BetaBinomial& k, int j) {
  return special::log_choose(k.trials, j) +
         special::log_beta(j + k.a, k.trials - j + k.b) - k.log_beta_ab;
}

}  // namespace

Normal::Normal(double mean_, double sd_) : mean(mean_), sd(sd_) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
    throw std::invalid_argument("Normal: sd must be finite and positive");
  }
}

StudentT::StudentT(double df_, double loc_, double scale_)
    : df(df_), loc(loc_), scale(scale_) {
  if (!(df > 0.0) || !(scale > 0.0) || !std::isfinite(loc)) {
    throw std::invalid_argument("StudentT: need df > 0 and scale > 0");
  }
  log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
             0.5 * std::log(df * std::numbers::pi) - std::log(scale);
}

Bernoulli::Bernoulli(double p_) : p(p_) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Bernoulli: p must lie in [0, 1]");
  }
}

Beta::Beta(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("Beta: shape parameters must be positive");
  }
  log_beta_ab = special::log_beta(a, b);
}

BetaBinomial::BetaBinomial(int trials_, double a_, double b_)
    : trials(trials_), a(a_), b(b_) {
  if (trials < 1) {
    throw std::invalid_argument("BetaBinomial: trials must be >= 1");
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("BetaBinomial: shape parameters must be positive");
  }
  log_beta_ab = special::log_beta(a, b);
}

NormalMixture::NormalMixture(std::vector<double> weights_,
                             std::vector<Normal> components_)
    : weights(std::move(weights_)), components(std::move(components_)) {
  if (weights.empty() || weights.size() != components.size()) {
    throw std::invalid_argument("NormalMixture: weights/components mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("NormalMixture: weights must be nonnegative");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("NormalMixture: weights must sum to 1");
  }
}

double log_density(const DensityKernel& k, double x) {
  return std::visit(
      [x](const auto& kern) -> double {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return normal_log_density(kern, x);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const double z = (x - kern.loc) / kern.scale;
          return kern.log_norm -
                 0.5 * (kern.df + 1.0) * std::log1p(z * z / kern.df);
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          if (x == 1.0) return std::log(kern.p);
          if (x == 0.0) return std::log1p(-kern.p);
          return -kInf;
        } else if constexpr (std::is_same_v<T, Beta>) {
          if (!(x > 0.0 && x < 1.0)) return -kInf;
          return (kern.a - 1.0) * std::log(x) +
                 (kern.b - 1.0) * std::log1p(-x) - kern.log_beta_ab;
        } else if constexpr (std::is_same_v<T, BetaBinomial>) {
          const int j = as_point(x);
          if (j < 0 || j > kern.trials) return -kInf;
          return beta_binomial_log_mass(kern, j);
        } else {
          // log-sum-exp over components so far tails stay finite
          double best = -kInf;
          for (std::size_t i = 0; i < kern.components.size(); ++i) {
            if (kern.weights[i] == 0.0) continue;
            best = std::max(best, std::log(kern.weights[i]) +
                                  normal_log_density(kern.components[i], x));
          }
          if (best == -kInf) return -kInf;
          double acc = 0.0;
          for (std::size_t i = 0; i < kern.components.size(); ++i) {
            if (kern.weights[i] == 0.0) continue;
            acc += std::exp(std::log(kern.weights[i]) +
                            normal_log_density(kern.components[i], x) - best);
          }
          return best + std::log(acc);
        }
      },
      k);
}

double density(const DensityKernel& k, double x) {
  return std::visit(
      [x](const auto& kern) -> double {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return normal_density(kern, x);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const double z = (x - kern.loc) / kern.scale;
          return std::exp(kern.log_norm) *
                 std::pow(1.0 + z * z / kern.df, -0.5 * (kern.df + 1.0));
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          if (x == 1.0) return kern.p;
          if (x == 0.0) return 1.0 - kern.p;
          return 0.0;
        } else if constexpr (std::is_same_v<T, Beta>) {
          if (!(x > 0.0 && x < 1.0)) return 0.0;
          return std::pow(x, kern.a - 1.0) * std::pow(1.0 - x, kern.b - 1.0) /
                 std::exp(kern.log_beta_ab);
        } else if constexpr (std::is_same_v<T, BetaBinomial>) {
          const int j = as_point(x);
          if (j < 0 || j > kern.trials) return 0.0;
          return std::exp(beta_binomial_log_mass(kern, j));
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < kern.components.size(); ++i) {
            acc += kern.weights[i] * normal_density(kern.components[i], x);
          }
          return acc;
        }
      },
      k);
}

double cdf(const DensityKernel& k, double x) {
  return std::visit(
      [x](const auto& kern) -> double {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return special::normal_cdf((x - kern.mean) / kern.sd);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const double z = (x - kern.loc) / kern.scale;
          if (z == 0.0) return 0.5;
          const double tail =
              0.5 * special::reg_inc_beta(0.5 * kern.df, 0.5,
                                          kern.df / (kern.df + z * z));
          return z > 0.0 ? 1.0 - tail : tail;
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          if (x < 0.0) return 0.0;
          if (x < 1.0) return 1.0 - kern.p;
          return 1.0;
        } else if constexpr (std::is_same_v<T, Beta>) {
          if (x <= 0.0) return 0.0;
          if (x >= 1.0) return 1.0;
          return special::reg_inc_beta(kern.a, kern.b, x);
        } else if constexpr (std::is_same_v<T, BetaBinomial>) {
          if (x < 0.0) return 0.0;
          const int top = std::min(kern.trials,
                                   static_cast<int>(std::floor(x)));
          double acc = 0.0;
          for (int j = 0; j <= top; ++j) {
            acc += std::exp(beta_binomial_log_mass(kern, j));
          }
          return std::min(acc, 1.0);
        } else {
          double acc = 0.0;
          for (std::size_t i = 0; i < kern.components.size(); ++i) {
            const Normal& c = kern.components[i];
            acc += kern.weights[i] * special::normal_cdf((x - c.mean) / c.sd);
          }
          return acc;
        }
      },
      k);
}

double sample(const DensityKernel& k, RandomSource& rng) {
  return std::visit(
      [&rng](const auto& kern) -> double {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return kern.mean + kern.sd * rng.normal();
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return kern.loc + kern.scale * rng.student_t(kern.df);
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.bernoulli(kern.p) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Beta>) {
          return rng.beta(kern.a, kern.b);
        } else if constexpr (std::is_same_v<T, BetaBinomial>) {
          const double p = rng.beta(kern.a, kern.b);
          int count = 0;
          for (int t = 0; t < kern.trials; ++t) {
            if (rng.bernoulli(p)) ++count;
          }
          return static_cast<double>(count);
        } else {
          const double u = rng.uniform();
          double acc = 0.0;
          std::size_t pick = kern.components.size() - 1;
          for (std::size_t i = 0; i < kern.weights.size(); ++i) {
            acc += kern.weights[i];
            if (u < acc) {
              pick = i;
              break;
            }
          }
          const Normal& c = kern.components[pick];
          return c.mean + c.sd * rng.normal();
        }
      },
      k);
}

Support support(const DensityKernel& k) {
  return std::visit(
      [](const auto& kern) -> Support {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal> ||
                      std::is_same_v<T, StudentT> ||
                      std::is_same_v<T, NormalMixture>) {
          return ContinuousInterval{-kInf, kInf};
        } else if constexpr (std::is_same_v<T, Beta>) {
          return ContinuousInterval{0.0, 1.0};
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return FiniteSet{{0, 1}};
        } else {
          std::vector<int> pts(kern.trials + 1);
          std::iota(pts.begin(), pts.end(), 0);
          return FiniteSet{std::move(pts)};
        }
      },
      k);
}

bool is_discrete(const DensityKernel& k) {
  return std::holds_alternative<Bernoulli>(k) ||
         std::holds_alternative<BetaBinomial>(k);
}

}  // namespace temper
