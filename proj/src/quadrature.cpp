#include "fsgl/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "fsgl/error.hpp"

namespace fsgl {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  auto weight = [n](double x) {
    const double d = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  // Non-negative zeros come in ascending order; mirror them.
  for (auto r = zeros.rbegin(); r != zeros.rend(); ++r) {
    if (*r == 0.0) continue;
    rule.x.push_back(-*r);
    rule.w.push_back(weight(*r));
  }
  for (double z : zeros) {
    rule.x.push_back(z);
    rule.w.push_back(weight(z));
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double abs_linear_power_integral(double a, double b, double w, double q) {
  if (w <= 0.0) return 0.0;
  if (a == 0.0) return std::pow(std::abs(b), q) * std::pow(w, q + 1.0) / (q + 1.0);
  const double z = b * w / a;
  if (z > -1.0) {
    // |a|^q w ((1+z)^{q+1} - 1) / ((q+1) z)
    if (std::abs(z) < 1e-300) return std::pow(std::abs(a), q) * w;
    const double ratio = std::expm1((q + 1.0) * std::log1p(z)) / ((q + 1.0) * z);
    return std::pow(std::abs(a), q) * w * ratio;
  }
  const double end = a + b * w;
  return (std::pow(std::abs(a), q + 1.0) + std::pow(std::abs(end), q + 1.0)) / ((q + 1.0) * std::abs(b));
}

}  // namespace fsgl
