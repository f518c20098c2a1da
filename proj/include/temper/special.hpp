#pragma once

namespace temper::special {

/// log B(a, b) via lgamma.
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b), x in [0, 1].
double reg_inc_beta(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double z);

/// log of the binomial coefficient C(n, k) for integer 0 <= k <= n.
double log_choose(int n, int k);

}  // namespace temper::special
