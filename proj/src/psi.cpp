#include "fsgl/psi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_support(double A, double B) {
  if (!(A >= 1.0)) throw DomainError("psi support lower end must be >= 1");
  if (!(A < B)) throw DomainError("psi support requires A < B");
}

double interpolate_log(const PsiFunction::Tabulated& tab, double p) {
  const auto& x = tab.p;
  if (p <= x.front()) return tab.value.front();
  if (p >= x.back()) return tab.value.back();
  const auto it = std::upper_bound(x.begin(), x.end(), p);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double w = (p - x[j - 1]) / (x[j] - x[j - 1]);
  return std::exp((1.0 - w) * std::log(tab.value[j - 1]) + w * std::log(tab.value[j]));
}

}  // namespace

PsiFunction::PsiFunction(Rule rule, double A, double B)
    : rule_(std::move(rule)), lower_(A), upper_(B) {}

PsiFunction PsiFunction::power_pole(double a, double b, double A, double B) {
  require_support(A, B);
  if (!(a > 0.0 && b > 0.0)) throw DomainError("power-pole exponents must be positive");
  if (std::isinf(B)) throw DomainError("power-pole family needs a finite upper end");
  return PsiFunction(PowerPole{a, b}, A, B);
}

PsiFunction PsiFunction::power(double beta, double A, double B) {
  require_support(A, B);
  if (!std::isfinite(beta)) throw DomainError("power exponent must be finite");
  return PsiFunction(Power{beta}, A, B);
}

PsiFunction PsiFunction::degenerate(double r, double value) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("degenerate psi needs finite r >= 1");
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("degenerate psi value must be positive");
  return PsiFunction(Degenerate{r, value}, r, r);
}

PsiFunction PsiFunction::constant(double value, double A, double B) {
  require_support(A, B);
  if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("constant psi must be positive");
  return PsiFunction(Constant{value}, A, B);
}

PsiFunction PsiFunction::tabulated(std::vector<double> p, std::vector<double> value, double A,
                                   double B) {
  if (p.empty() || p.size() != value.size())
    throw DomainError("tabulated psi needs matching non-empty node arrays");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) throw DomainError("tabulated psi node is not finite");
    if (i > 0 && !(p[i] > p[i - 1])) throw DomainError("tabulated psi nodes must increase");
    if (!(value[i] > 0.0) || !std::isfinite(value[i])) {
      std::ostringstream os;
      os << "tabulated psi value at p=" << p[i] << " is not finite and positive";
      throw DomainError(os.str());
    }
  }
  if (std::isnan(A)) A = p.front();
  if (std::isnan(B)) B = p.back();
  if (A > p.front() || B < p.back()) throw DomainError("tabulated psi nodes must lie in [A,B]");
  if (p.size() == 1) {
    // A single node carries the same information as the degenerate rule.
    return PsiFunction(Tabulated{std::move(p), std::move(value)}, A, B);
  }
  require_support(A, B);
  return PsiFunction(Tabulated{std::move(p), std::move(value)}, A, B);
}

PsiFunction PsiFunction::callable(std::function<double(double)> fn, double A, double B,
                                  std::string label) {
  require_support(A, B);
  if (!fn) throw DomainError("callable psi needs a function");
  return PsiFunction(Callable{std::move(fn), std::move(label)}, A, B);
}

double PsiFunction::operator()(double p) const {
  if (!std::isfinite(p)) throw DomainError("psi evaluated at a non-finite exponent");
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) { return p == d.r ? d.value : kInfinity; },
          [&](const Tabulated& t) {
            if (p >= t.p.front() && p <= t.p.back()) return interpolate_log(t, p);
            if (p > lower_ && p < upper_) {
              std::ostringstream os;
              os << "p=" << p << " lies inside the psi support but outside the tabulated hull ["
                 << t.p.front() << ", " << t.p.back() << "]";
              throw HullError(os.str());
            }
            return kInfinity;
          },
          [&](const PowerPole& r) {
            if (!(p > lower_ && p < upper_)) return kInfinity;
            return std::pow(p - lower_, -r.a) * std::pow(upper_ - p, -r.b);
          },
          [&](const Power& r) {
            if (!(p > lower_ && p < upper_)) return kInfinity;
            return std::pow(p, r.beta);
          },
          [&](const Constant& r) { return (p > lower_ && p < upper_) ? r.value : kInfinity; },
          [&](const Callable& r) {
            if (!(p > lower_ && p < upper_)) return kInfinity;
            const double v = r.fn(p);
            return std::isnan(v) ? kInfinity : v;
          },
      },
      rule_);
}

ExponentInterval PsiFunction::scan_interval() const {
  if (const auto* t = std::get_if<Tabulated>(&rule_))
    return ExponentInterval{t->p.front(), t->p.back(), true};
  if (is_degenerate()) return ExponentInterval{lower_, lower_, true};
  return ExponentInterval{lower_, upper_, false};
}

void PsiFunction::check_invariants() const {
  if (is_degenerate()) return;
  const ExponentInterval iv = scan_interval();
  double inf_value = kInfinity;
  const int n = 2048;
  for (int i = 0; i < n; ++i) {
    const double t = iv.closed ? static_cast<double>(i) / (n - 1)
                               : static_cast<double>(i + 1) / (n + 1);
    const double p = std::isinf(iv.hi) ? iv.lo + t / (1.0 - t) : iv.lo + t * (iv.hi - iv.lo);
    const double v = (*this)(p);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "psi(" << p << ") = " << v << " is not strictly positive";
      throw DomainError(os.str());
    }
    inf_value = std::min(inf_value, v);
  }
  if (!(inf_value > 0.0)) throw DomainError("inf psi over its support is not positive");
}

FundamentalValue fundamental_function_argmax(const PsiFunction& psi, double delta,
                                             const ExponentSearchConfig& cfg) {
  if (!(delta > 0.0)) throw DomainError("fundamental function needs delta > 0");
  if (const auto* d = std::get_if<PsiFunction::Degenerate>(&psi.rule()))
    return {std::pow(delta, 1.0 / d->r) / d->value, d->r};
  const double log_delta = std::log(delta);
  const auto best = maximize_over_exponents(
      psi.scan_interval(),
      [&](double p) { return log_delta / p - std::log(psi(p)); }, cfg);
  if (!std::isfinite(best.log_value) && best.log_value < 0)
    throw DomainError("psi has empty effective support");
  return {std::exp(best.log_value), best.p};
}

double fundamental_function(const PsiFunction& psi, double delta, const ExponentSearchConfig& cfg) {
  return fundamental_function_argmax(psi, delta, cfg).value;
}

double truncated_fundamental_function(const PsiFunction& psi, double q, double delta,
                                      const ExponentSearchConfig& cfg) {
  if (!(delta > 0.0)) throw DomainError("fundamental function needs delta > 0");
  if (psi.is_degenerate()) throw DomainError("truncation needs a non-degenerate support");
  if (!(q > psi.lower() && q < psi.upper())) {
    std::ostringstream os;
    os << "truncation point q=" << q << " outside (" << psi.lower() << ", " << psi.upper() << ")";
    throw DomainError(os.str());
  }
  ExponentInterval iv = psi.scan_interval();
  if (iv.closed) {
    if (q >= iv.hi) throw HullError("truncation point lies beyond the tabulated hull");
    iv.lo = std::max(iv.lo, q);
  } else {
    iv.lo = q;
  }
  const double log_delta = std::log(delta);
  const auto best = maximize_over_exponents(
      iv, [&](double p) { return log_delta / p - std::log(psi(p)); }, cfg);
  return std::exp(best.log_value);
}

double psi_tilde_conjugate(const PsiFunction& psi, double s, const ExponentSearchConfig& cfg) {
  if (const auto* d = std::get_if<PsiFunction::Degenerate>(&psi.rule()))
    return d->r * s - d->r * std::log(d->value);
  const auto best = maximize_over_exponents(
      psi.scan_interval(), [&](double p) { return p * s - p * std::log(psi(p)); }, cfg);
  // An unbounded support with a maximiser running to the end means the
  // supremum is not attained; report +inf when the objective still grows.
  if (best.at_upper_end && std::isinf(psi.upper()) && !psi.is_tabulated()) {
    const double far = best.p * 4.0 + 1.0;
    const double v_far = far * s - far * std::log(psi(far));
    if (v_far > best.log_value) return kInfinity;
  }
  return best.log_value;
}

double tail_bound_from_psi(const PsiFunction& psi, double norm, double z,
                           const ExponentSearchConfig& cfg) {
  if (!(norm > 0.0)) throw DomainError("tail bound needs a positive norm");
  if (z < norm) throw DomainError("tail bound is valid only for z >= norm");
  const double conj = psi_tilde_conjugate(psi, std::log(z / norm), cfg);
  return std::clamp(2.0 * std::exp(-conj), 0.0, 2.0);
}

PsiFunction natural_function_from_family(const std::vector<double>& p_grid,
                                         const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw DomainError("natural function of an empty family");
  std::vector<double> sup(p_grid.size(), 0.0);
  for (const auto& c : curves) {
    if (c.size() != p_grid.size()) throw DomainError("curve length differs from p-grid length");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!std::isfinite(c[i])) throw DomainError("family curve is not finite on the p-grid");
      sup[i] = std::max(sup[i], std::abs(c[i]));
    }
  }
  return PsiFunction::tabulated(p_grid, std::move(sup));
}

}  // namespace fsgl
