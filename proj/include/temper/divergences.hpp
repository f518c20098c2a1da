#pragma once

#include "temper/dists.hpp"
#include "temper/quadrature.hpp"

namespace temper {

/// Total variation distance, 0.5 * integral (or sum) of |p - q|, in [0, 1].
/// Both kernels must share support type (continuous/continuous or
/// discrete/discrete); mixed types are rejected.
double tvd(const DensityKernel& p, const DensityKernel& q,
           const QuadratureSpec& quad = {});

/// Squared Hellinger distance, 0.5 * integral of (sqrt(p) - sqrt(q))^2.
double hellinger_sq(const DensityKernel& p, const DensityKernel& q,
                    const QuadratureSpec& quad = {});

/// Kullback-Leibler divergence, integral of p*log(p/q); the integrand is 0
/// where p vanishes. Returns +infinity (never throws) when the support of p
/// is not contained in the support of q.
double kl(const DensityKernel& p, const DensityKernel& q,
          const QuadratureSpec& quad = {});

/// Closed-form KL between two normals.
double kl_normal(const Normal& p, const Normal& q);

/// Finite integration interval for a kernel pair: the union of each kernel's
/// mean +/- 12 effective sd (effective sd for Student-t uses
/// scale*sqrt(df/(df-2)) when df > 2, and a CDF-based widening otherwise),
/// clipped to the union of supports.
ContinuousInterval integration_range(const DensityKernel& p,
                                     const DensityKernel& q);

}  // namespace temper
