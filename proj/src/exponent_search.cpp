#include "fsgl/exponent_search.hpp"

#include <cmath>
#include <vector>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

double to_exponent(const ExponentInterval& iv, double t) {
  if (std::isinf(iv.hi)) return iv.lo + t / (1.0 - t);
  return iv.lo + t * (iv.hi - iv.lo);
}

}  // namespace

ExponentArgmax maximize_over_exponents(const ExponentInterval& iv,
                                       const std::function<double(double)>& log_objective,
                                       const ExponentSearchConfig& cfg) {
  if (!(iv.lo < iv.hi) && !(iv.closed && iv.lo == iv.hi))
    throw DomainError("exponent interval is empty");
  if (cfg.nodes < 3) throw DomainError("exponent scan needs at least 3 nodes");
  if (iv.closed && std::isinf(iv.hi)) throw DomainError("closed exponent interval must be bounded");

  const int n = cfg.nodes;
  // Scan positions in t. Open intervals use t_i = (i+1)/(n+1); closed ones
  // include both ends.
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = iv.closed ? static_cast<double>(i) / (n - 1) : static_cast<double>(i + 1) / (n + 1);
  if (iv.closed && iv.lo == iv.hi) {
    ExponentArgmax out;
    out.p = iv.lo;
    out.log_value = log_objective(iv.lo);
    return out;
  }

  auto eval = [&](double tt) {
    const double v = log_objective(to_exponent(iv, tt));
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };

  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    vals[i] = eval(t[i]);
    if (vals[i] > best_val) {
      best_val = vals[i];
      best = i;
    }
  }
  ExponentArgmax out;
  if (best < 0) return out;  // objective is -inf everywhere
  out.log_value = best_val;
  out.p = to_exponent(iv, t[best]);

  // Golden-section on the bracket formed by the neighbouring nodes. Outside
  // the scanned nodes the bracket extends to the interval end in t.
  double a = best > 0 ? t[best - 1] : (iv.closed ? t[0] : 0.0);
  double b = best + 1 < n ? t[best + 1] : (iv.closed ? t[n - 1] : 1.0);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < cfg.max_refine_iterations && (b - a) > cfg.t_tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = eval(d);
    }
  }
  const double tm = fc >= fd ? c : d;
  const double fm = std::max(fc, fd);
  if (fm > out.log_value) {
    out.log_value = fm;
    out.p = to_exponent(iv, tm);
  }
  out.at_upper_end = (best == n - 1);
  return out;
}

}  // namespace fsgl
