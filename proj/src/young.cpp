#include "fsgl/young.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

double interp_mu(const YoungFunction::ExpOfMu& r, double u) {
  const double s = std::log(u);
  const auto& x = r.u;
  std::size_t j;
  if (u <= x.front()) {
    j = 1;
  } else if (u >= x.back()) {
    j = x.size() - 1;
  } else {
    j = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), u) - x.begin());
  }
  const double s0 = std::log(x[j - 1]), s1 = std::log(x[j]);
  const double w = (s - s0) / (s1 - s0);
  return (1.0 - w) * r.mu[j - 1] + w * r.mu[j];
}

}  // namespace

YoungFunction::YoungFunction(Rule r) : rule_(std::move(r)) {}

YoungFunction YoungFunction::power(double exponent) {
  if (!(exponent >= 1.0)) throw DomainError("power Young function needs exponent >= 1");
  return YoungFunction(Power{exponent});
}

YoungFunction YoungFunction::exponential(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("exponential family needs m > 0");
  return YoungFunction(Exponential{m});
}

YoungFunction YoungFunction::exp_of_mu(std::vector<double> u, std::vector<double> mu,
                                       double patch_radius) {
  if (u.size() < 2 || u.size() != mu.size())
    throw DomainError("exp-of-mu rule needs at least two matching nodes");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0) || !std::isfinite(mu[i])) throw DomainError("exp-of-mu node is invalid");
    if (i > 0 && !(u[i] > u[i - 1])) throw DomainError("exp-of-mu nodes must increase");
  }
  if (!(patch_radius > 0.0)) throw DomainError("exp-of-mu needs a positive patch radius");
  YoungFunction out(ExpOfMu{std::move(u), std::move(mu), patch_radius});
  const auto& r = std::get<ExpOfMu>(out.rule_);
  out.patch_c_ = std::exp(interp_mu(r, patch_radius)) / (patch_radius * patch_radius);
  // Increasing beyond the patch is required for invertibility.
  for (std::size_t i = 1; i < r.u.size(); ++i)
    if (r.u[i] > patch_radius && r.mu[i] < r.mu[i - 1])
      throw DomainError("exp-of-mu exponent decreases beyond the patch radius");
  return out;
}

YoungFunction YoungFunction::tabulated(std::vector<double> u, std::vector<double> phi,
                                       double growth_factor) {
  if (u.size() < 3 || u.size() != phi.size())
    throw DomainError("tabulated Young function needs at least three matching nodes");
  if (u.front() != 0.0 || phi.front() != 0.0)
    throw DomainError("tabulated Young function must start at (0, 0)");
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (!(u[i] > u[i - 1])) throw DomainError("tabulated Young abscissae must increase");
    if (!(phi[i] > phi[i - 1])) throw DomainError("tabulated Young function must increase strictly");
  }
  ConvexSamples s{u, phi, true, false};
  check_convex(s);
  if (!(phi.back() >= growth_factor * phi[1]))
    throw DomainError("tabulated Young function does not grow by the configured factor");
  return YoungFunction(Tabulated{std::move(u), std::move(phi)});
}

double YoungFunction::operator()(double u) const {
  const double a = std::abs(u);
  if (const auto* r = std::get_if<Power>(&rule_)) return std::pow(a, r->exponent);
  if (const auto* r = std::get_if<Exponential>(&rule_)) return std::expm1(std::pow(a, r->m) / r->m);
  if (const auto* r = std::get_if<ExpOfMu>(&rule_)) {
    if (a <= r->patch_radius) return patch_c_ * a * a;
    return std::exp(interp_mu(*r, a));
  }
  const auto& t = std::get<Tabulated>(rule_);
  if (a >= t.u.back()) {
    const std::size_t n = t.u.size();
    const double sl = (t.phi[n - 1] - t.phi[n - 2]) / (t.u[n - 1] - t.u[n - 2]);
    return t.phi.back() + sl * (a - t.u.back());
  }
  const auto j = static_cast<std::size_t>(std::upper_bound(t.u.begin(), t.u.end(), a) - t.u.begin());
  const double w = (a - t.u[j - 1]) / (t.u[j] - t.u[j - 1]);
  return (1.0 - w) * t.phi[j - 1] + w * t.phi[j];
}

double YoungFunction::inverse(double y) const {
  if (!(y >= 0.0)) throw DomainError("Young inverse needs y >= 0");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) throw DomainError("Young inverse of +inf");
  double lo = 0.0, hi = 1.0;
  int grow = 0;
  while ((*this)(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 2000 || !std::isfinite(hi))
      throw DomainError("Young function cannot reach the requested value");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool YoungFunction::is_exponential_type() const {
  return std::holds_alternative<Exponential>(rule_) || std::holds_alternative<ExpOfMu>(rule_);
}

double YoungFunction::log_representative(double u) const {
  if (!(u > 0.0)) throw DomainError("log representative needs u > 0");
  if (const auto* r = std::get_if<Exponential>(&rule_)) return std::pow(u, r->m) / r->m;
  if (const auto* r = std::get_if<ExpOfMu>(&rule_)) return interp_mu(*r, u);
  throw DomainError("Young function is not of exponential type N = exp(mu)");
}

double orlicz_fundamental(const YoungFunction& phi, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("Orlicz fundamental needs delta in (0,1]");
  return delta * phi.inverse(1.0 / delta);
}

OrliczPsiConfig default_orlicz_psi_config() {
  OrliczPsiConfig cfg;
  const int n = 128;
  cfg.p_grid.resize(n);
  for (int i = 0; i < n; ++i) cfg.p_grid[i] = std::exp(std::log(1.0) + (std::log(1e3) - 0.0) * i / (n - 1));
  return cfg;
}

PsiFunction psi_from_orlicz(const YoungFunction& N, const OrliczPsiConfig& cfg) {
  if (!N.is_exponential_type())
    throw DomainError("psi_from_orlicz needs an N-function of the form exp(mu)");
  if (cfg.p_grid.empty()) throw DomainError("psi_from_orlicz needs a p-grid");
  ConvexSamples g;
  if (const auto* r = std::get_if<YoungFunction::ExpOfMu>(&N.rule())) {
    for (std::size_t i = 0; i < r->u.size(); ++i) {
      g.y.push_back(std::log(r->u[i]));
      g.g.push_back(r->mu[i]);
    }
  } else {
    g = ConvexSamples::tabulate([&](double x) { return N.log_representative(std::exp(x)); },
                                cfg.x_lo, cfg.x_hi, cfg.x_nodes);
  }
  try {
    check_convex(g, 1e-7);
  } catch (const ConvexityError& e) {
    throw ConvexityError(std::string("log N(e^x) is not convex: ") + e.what());
  }
  std::vector<double> ps = cfg.p_grid;
  std::sort(ps.begin(), ps.end());
  const auto conj = legendre_transform(g, ps);
  std::vector<double> keep_p, keep_v;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i] > 0.0) || !std::isfinite(conj[i])) continue;
    const double v = std::exp(conj[i] / ps[i]);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    if (ps[i] < 1.0) continue;
    keep_p.push_back(ps[i]);
    keep_v.push_back(v);
  }
  if (keep_p.empty())
    throw DomainError("psi_from_orlicz: the conjugate is infinite on the whole p-grid");
  return PsiFunction::tabulated(std::move(keep_p), std::move(keep_v), keep_p.front(), kInfinity);
}

YoungFunction orlicz_from_psi(const PsiFunction& psi, const PsiOrliczConfig& cfg) {
  if (!std::isinf(psi.upper()))
    throw DomainError("G psi with B < inf does not coincide with an Orlicz space");
  ConvexSamples t;
  t.closed_left = true;
  t.closed_right = false;
  if (const auto* tab = std::get_if<PsiFunction::Tabulated>(&psi.rule())) {
    for (std::size_t i = 0; i < tab->p.size(); ++i) {
      t.y.push_back(tab->p[i]);
      t.g.push_back(tab->p[i] * std::log(tab->value[i]));
    }
  } else {
    const double lo = psi.lower() * (1.0 + 1e-9) + 1e-12;
    if (!(cfg.p_max > lo)) throw DomainError("p_max must exceed the psi support start");
    for (int i = 0; i < cfg.p_nodes; ++i) {
      const double p = std::exp(std::log(lo) + (std::log(cfg.p_max) - std::log(lo)) * i / (cfg.p_nodes - 1));
      t.y.push_back(p);
      t.g.push_back(p * std::log(psi(p)));
    }
  }
  if (cfg.convexify) {
    t = convex_envelope(t);
  } else {
    try {
      check_convex(t, 1e-7);
    } catch (const ConvexityError& e) {
      throw ConvexityError(std::string("p log psi(p) is not convex: ") + e.what());
    }
  }
  const ConvexSamples c = conjugate_samples(t);
  std::vector<double> u, mu;
  // Left of the first breakpoint the conjugate continues linearly with
  // slope p_0 (the support starts there); store one far node for it.
  const double far = 40.0;
  u.push_back(std::exp(c.y.front() - far));
  mu.push_back(c.g.front() - far * t.y.front());
  for (std::size_t i = 0; i < c.y.size(); ++i) {
    u.push_back(std::exp(c.y[i]));
    mu.push_back(c.g[i]);
  }
  return YoungFunction::exp_of_mu(std::move(u), std::move(mu), cfg.patch_radius);
}

}  // namespace fsgl
