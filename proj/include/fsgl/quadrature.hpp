#pragma once

#include <vector>

namespace fsgl {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached n-point rule; safe to call from several threads.
const GaussRule& gauss_legendre(int n);

/// log(exp(a) + exp(b)) without overflow; -inf is the neutral element.
double log_add(double a, double b);

/// Integral of |a + b t|^q over t in [0, w], q > 0, without cancellation.
double abs_linear_power_integral(double a, double b, double w, double q);

}  // namespace fsgl
