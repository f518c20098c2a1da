#pragma once

#include <array>
#include <cmath>

namespace temper {

/// Adaptive-subdivision Gauss-Legendre integration.
struct QuadratureSpec {
  double abs_tolerance = 1e-10;
  int max_depth = 60;
};

namespace detail {

// Nodes/weights of the 15-point rule on [-1, 1], computed once by Newton
// iteration on the Legendre polynomial.
struct GaussLegendre15 {
  std::array<double, 15> node;
  std::array<double, 15> weight;
  GaussLegendre15();
};

const GaussLegendre15& gl15();

template <class F>
double gl15_panel(const F& f, double lo, double hi) {
  const GaussLegendre15& rule = gl15();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int i = 0; i < 15; ++i) {
    sum += rule.weight[i] * f(mid + half * rule.node[i]);
  }
  return half * sum;
}

template <class F>
double adapt(const F& f, double lo, double hi, double whole, double tol,
             int depth, int max_depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = gl15_panel(f, lo, mid);
  const double right = gl15_panel(f, mid, hi);
  const double refined = left + right;
  if (std::fabs(refined - whole) <= tol || depth >= max_depth) {
    return refined;
  }
  return adapt(f, lo, mid, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, mid, hi, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Integral of f over [lo, hi] to the spec's absolute tolerance.
template <class F>
double integrate(const F& f, double lo, double hi,
                 const QuadratureSpec& spec = {}) {
  if (!(lo < hi)) return 0.0;
  const double whole = detail::gl15_panel(f, lo, hi);
  return detail::adapt(f, lo, hi, whole, spec.abs_tolerance, 0, spec.max_depth);
}

}  // namespace temper
