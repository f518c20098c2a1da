#include "temper/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace temper {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-width multiplier of the range policy.
constexpr double kSdMultiplier = 12.0;

struct Range {
  double lo;
  double hi;
};

Range policy_range(const DensityKernel& k) {
  return std::visit(
      [&k](const auto& kern) -> Range {
        using T = std::decay_t<decltype(kern)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return {kern.mean - kSdMultiplier * kern.sd,
                  kern.mean + kSdMultiplier * kern.sd};
        } else if constexpr (std::is_same_v<T, StudentT>) {
          // Polynomial tails: 12 effective sd still leaves ~1e-7 outside for
          // df = 10, so widen until the truncated mass is negligible.
          double h = kSdMultiplier * kern.scale;
          if (kern.df > 2.0) {
            h *= std::sqrt(kern.df / (kern.df - 2.0));
          }
          while (cdf(k, kern.loc - h) > 5e-14 ||
                 1.0 - cdf(k, kern.loc + h) > 5e-14) {
            h *= 2.0;
          }
          return {kern.loc - h, kern.loc + h};
        } else if constexpr (std::is_same_v<T, Beta>) {
          return {0.0, 1.0};
        } else if constexpr (std::is_same_v<T, NormalMixture>) {
          double lo = kInf, hi = -kInf;
          for (const Normal& c : kern.components) {
            lo = std::min(lo, c.mean - kSdMultiplier * c.sd);
            hi = std::max(hi, c.mean + kSdMultiplier * c.sd);
          }
          return {lo, hi};
        } else {
          throw std::logic_error("policy_range: discrete kernel");
        }
      },
      k);
}

Range clip_to_support(Range r, const DensityKernel& k) {
  const auto iv = std::get<ContinuousInterval>(support(k));
  return {std::max(r.lo, iv.lo), std::min(r.hi, iv.hi)};
}

// Union of the two kernels' finite support points.
std::vector<int> point_union(const DensityKernel& p, const DensityKernel& q) {
  const auto sp = std::get<FiniteSet>(support(p)).points;
  const auto sq = std::get<FiniteSet>(support(q)).points;
  std::vector<int> out;
  out.reserve(sp.size() + sq.size());
  std::set_union(sp.begin(), sp.end(), sq.begin(), sq.end(),
                 std::back_inserter(out));
  return out;
}

void require_same_support_type(const DensityKernel& p, const DensityKernel& q,
                               const char* op) {
  if (is_discrete(p) != is_discrete(q)) {
    throw std::invalid_argument(std::string(op) +
                                ": kernels have mixed support types");
  }
}

}  // namespace

ContinuousInterval integration_range(const DensityKernel& p,
                                     const DensityKernel& q) {
  const Range rp = clip_to_support(policy_range(p), p);
  const Range rq = clip_to_support(policy_range(q), q);
  return {std::min(rp.lo, rq.lo), std::max(rp.hi, rq.hi)};
}

double tvd(const DensityKernel& p, const DensityKernel& q,
           const QuadratureSpec& quad) {
  require_same_support_type(p, q, "tvd");
  double value;
  if (is_discrete(p)) {
    double acc = 0.0;
    for (int pt : point_union(p, q)) {
      acc += std::fabs(density(p, pt) - density(q, pt));
    }
    value = 0.5 * acc;
  } else {
    const auto [lo, hi] = integration_range(p, q);
    value = 0.5 * integrate(
                      [&](double x) {
                        return std::fabs(density(p, x) - density(q, x));
                      },
                      lo, hi, quad);
  }
  return std::clamp(value, 0.0, 1.0);
}

double hellinger_sq(const DensityKernel& p, const DensityKernel& q,
                    const QuadratureSpec& quad) {
  require_same_support_type(p, q, "hellinger_sq");
  double value;
  if (is_discrete(p)) {
    double acc = 0.0;
    for (int pt : point_union(p, q)) {
      const double d = std::sqrt(density(p, pt)) - std::sqrt(density(q, pt));
      acc += d * d;
    }
    value = 0.5 * acc;
  } else {
    const auto [lo, hi] = integration_range(p, q);
    value = 0.5 * integrate(
                      [&](double x) {
                        const double d =
                            std::sqrt(density(p, x)) - std::sqrt(density(q, x));
                        return d * d;
                      },
                      lo, hi, quad);
  }
  return std::clamp(value, 0.0, 1.0);
}

double kl(const DensityKernel& p, const DensityKernel& q,
          const QuadratureSpec& quad) {
  if (is_discrete(p) != is_discrete(q)) return kInf;
  if (is_discrete(p)) {
    double acc = 0.0;
    for (int pt : point_union(p, q)) {
      const double mp = density(p, pt);
      if (mp == 0.0) continue;
      const double mq = density(q, pt);
      if (mq == 0.0) return kInf;
      acc += mp * std::log(mp / mq);
    }
    return std::max(acc, 0.0);
  }
  const auto sp = std::get<ContinuousInterval>(support(p));
  const auto sq = std::get<ContinuousInterval>(support(q));
  if (sp.lo < sq.lo || sp.hi > sq.hi) return kInf;
  const auto [lo, hi] = integration_range(p, q);
  const double value = integrate(
      [&](double x) {
        const double lp = log_density(p, x);
        if (lp == -kInf) return 0.0;
        return std::exp(lp) * (lp - log_density(q, x));
      },
      lo, hi, quad);
  return std::max(value, 0.0);
}

double kl_normal(const Normal& p, const Normal& q) {
  const double dm = p.mean - q.mean;
  return std::log(q.sd / p.sd) +
         (p.sd * p.sd + dm * dm) / (2.0 * q.sd * q.sd) - 0.5;
}

}  // namespace temper
