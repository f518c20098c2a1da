#pragma once

#include <variant>
#include <vector>

#include "temper/rng.hpp"

namespace temper {

/// Univariate probability kernels. Immutable values: parameters are validated
/// at construction and never change, so kernels are safe to share across
/// threads.

struct Normal {
  Normal(double mean, double sd);
  double mean;
  double sd;
};

struct StudentT {
  StudentT(double df, double loc, double scale);
  double df;
  double loc;
  double scale;
  double log_norm;  // cached log normalization constant
};

struct Bernoulli {
  explicit Bernoulli(double p);
  double p;
};

struct Beta {
  Beta(double a, double b);
  double a;
  double b;
  double log_beta_ab;
};

struct BetaBinomial {
  BetaBinomial(int trials, double a, double b);
  int trials;
  double a;
  double b;
  double log_beta_ab;
};

struct NormalMixture {
  NormalMixture(std::vector<double> weights, std::vector<Normal> components);
  std::vector<double> weights;
  std::vector<Normal> components;
};

using DensityKernel =
    std::variant<Normal, StudentT, Bernoulli, Beta, BetaBinomial, NormalMixture>;

/// Support description: a (possibly unbounded) interval or a finite set of
/// integer points.
struct ContinuousInterval {
  double lo;
  double hi;
};

struct FiniteSet {
  std::vector<int> points;  // sorted, nonempty
};

using Support = std::variant<ContinuousInterval, FiniteSet>;

/// Natural-log density (or mass); -infinity where the mass is exactly zero.
double log_density(const DensityKernel& k, double x);

/// Density (or mass) evaluated directly, not as exp(log_density).
double density(const DensityKernel& k, double x);

/// Cumulative distribution function.
double cdf(const DensityKernel& k, double x);

/// One draw from the kernel; the sequence is fully determined by rng state.
double sample(const DensityKernel& k, RandomSource& rng);

Support support(const DensityKernel& k);

bool is_discrete(const DensityKernel& k);

}  // namespace temper
