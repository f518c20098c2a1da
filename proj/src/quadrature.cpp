#include "temper/quadrature.hpp"

#include <numbers>

namespace temper::detail {

GaussLegendre15::GaussLegendre15() {
  constexpr int n = 15;
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::fabs(z - z1) > 1e-15);
    node[i] = -z;
    node[n - 1 - i] = z;
    weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weight[n - 1 - i] = weight[i];
  }
}

const GaussLegendre15& gl15() {
  static const GaussLegendre15 rule;
  return rule;
}

}  // namespace temper::detail
