#include "fsgl/norms.hpp"

#include <algorithm>
#include <cmath>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

std::vector<double> cell_midpoints_impl(const GridFunction& f) {
  const int d = f.dim(), n = f.size();
  std::vector<double> cur = f.values();
  std::vector<int> shape(d, n);
  for (int k = 0; k < d; ++k) {
    std::size_t inner = 1, outer = 1;
    for (int j = k + 1; j < d; ++j) inner *= shape[j];
    for (int j = 0; j < k; ++j) outer *= shape[j];
    const int m = shape[k] - 1;
    std::vector<double> next(outer * m * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (int i = 0; i < m; ++i)
        for (std::size_t in = 0; in < inner; ++in)
          next[(o * m + i) * inner + in] =
              0.5 * (cur[(o * shape[k] + i) * inner + in] + cur[(o * shape[k] + i + 1) * inner + in]);
    cur.swap(next);
    shape[k] = m;
  }
  return cur;
}

double lp_of_values(const std::vector<double>& mids, double p) {
  double M = 0.0;
  for (double v : mids) M = std::max(M, std::abs(v));
  if (M == 0.0) return 0.0;
  double s = 0.0;
  for (double v : mids) s += std::pow(std::abs(v) / M, p);
  return M * std::pow(s / static_cast<double>(mids.size()), 1.0 / p);
}

GrandLebesgueResult sup_ratio(const std::function<double(double)>& curve, const PsiFunction& psi,
                              const ExponentSearchConfig& cfg) {
  GrandLebesgueResult res;
  if (const auto* dg = std::get_if<PsiFunction::Degenerate>(&psi.rule())) {
    res.value = curve(dg->r) / dg->value;
    res.argmax_p = dg->r;
    return res;
  }
  const auto arg = maximize_over_exponents(psi.scan_interval(), [&](double p) {
    const double c = curve(p);
    const double ps = psi(p);
    if (!(c > 0.0) || !std::isfinite(ps)) return -kInfinity;
    return std::log(c) - std::log(ps);
  }, cfg);
  if (arg.log_value == -kInfinity) return res;
  res.value = std::exp(arg.log_value);
  res.argmax_p = arg.p;
  res.divergent_at_upper = arg.at_upper_end;
  return res;
}

}  // namespace

std::vector<double> cell_midpoint_values(const GridFunction& f) { return cell_midpoints_impl(f); }

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  const double vol = std::pow(f.extent(), f.dim());
  return lp_of_values(cell_midpoints_impl(f), p) * std::pow(vol, 1.0 / p);
}

GrandLebesgueResult grand_lebesgue_norm(const GridFunction& f, const PsiFunction& psi,
                                        const ExponentSearchConfig& cfg) {
  const auto mids = cell_midpoints_impl(f);
  const double vol = std::pow(f.extent(), f.dim());
  return sup_ratio([&](double p) { return lp_of_values(mids, p) * std::pow(vol, 1.0 / p); }, psi, cfg);
}

GrandLebesgueResult grand_lebesgue_norm(const std::function<double(double)>& lp_curve,
                                        const PsiFunction& psi, const ExponentSearchConfig& cfg) {
  return sup_ratio(lp_curve, psi, cfg);
}

std::vector<double> default_p_grid(const FractionalIndex& alpha, const SeminormConfig& cfg, double A,
                                   double B) {
  const double lo = std::max(A, alpha.p0()) + cfg.p_offset;
  const double hi = std::min(B, cfg.p_cap);
  if (!(hi > lo)) throw DomainError("empty exponent range for the p-grid (condition A(alpha) < B fails)");
  std::vector<double> grid(cfg.p_nodes);
  for (int i = 0; i < cfg.p_nodes; ++i)
    grid[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (cfg.p_nodes - 1));
  return grid;
}

NaturalZeta zeta_natural(const GridFunction& f, const FractionalIndex& alpha,
                         const std::vector<double>& p_grid, const SeminormConfig& cfg) {
  if (p_grid.empty()) throw DomainError("zeta_natural needs a non-empty p-grid");
  NaturalZeta z;
  z.p = p_grid;
  std::sort(z.p.begin(), z.p.end());
  for (double p : z.p)
    if (!(p > alpha.p0())) throw DomainError("p-grid must lie in (p_0, inf)");
  std::vector<double> fp, fv;
  bool any_finite = false;
  for (double p : z.p) {
    const auto r = gagliardo_seminorm_nd(f, alpha, p, cfg);
    z.value.push_back(r.value);
    z.status.push_back(r.status);
    if (r.status == SeminormStatus::ok && std::isfinite(r.value)) {
      any_finite = true;
      if (r.value > 0.0) {
        fp.push_back(p);
        fv.push_back(r.value);
      }
    }
  }
  if (!any_finite) throw DomainError("seminorm diverges on every node of the p-grid");
  if (fp.empty()) {
    z.degenerate = true;
    return z;
  }
  const bool open_top = z.status.back() == SeminormStatus::ok && z.p.back() == fp.back();
  const double B = open_top ? kInfinity : std::numeric_limits<double>::quiet_NaN();
  if (fp.size() == 1) {
    z.psi = PsiFunction::degenerate(fp[0], fv[0]);
  } else {
    z.psi = PsiFunction::tabulated(fp, fv, std::numeric_limits<double>::quiet_NaN(), B);
  }
  return z;
}

double psi_alpha_coefficient(const FractionalIndex& alpha, double p) {
  const int d = alpha.dim();
  if (!(p > alpha.p0())) return kInfinity;
  double c = std::pow(8.0, d) * std::pow(4.0, d / p);
  for (double a : alpha.alpha) c *= (a + 1.0 / p) / (a - 1.0 / p);
  return c;
}

PsiFunction psi_alpha(const PsiFunction& zeta, const FractionalIndex& alpha) {
  const double p0 = alpha.p0();
  const char* cond = "condition A(alpha) = max(A, 1/alpha_0) < B fails: empty effective support";
  if (const auto* dg = std::get_if<PsiFunction::Degenerate>(&zeta.rule())) {
    if (!(dg->r > p0)) throw DomainError(cond);
    return PsiFunction::degenerate(dg->r, dg->value * psi_alpha_coefficient(alpha, dg->r));
  }
  const double A = std::max(zeta.lower(), p0);
  if (!(A < zeta.upper())) throw DomainError(cond);
  if (const auto* tab = std::get_if<PsiFunction::Tabulated>(&zeta.rule())) {
    std::vector<double> p, v;
    for (std::size_t i = 0; i < tab->p.size(); ++i) {
      if (!(tab->p[i] > p0)) continue;
      p.push_back(tab->p[i]);
      v.push_back(tab->value[i] * psi_alpha_coefficient(alpha, tab->p[i]));
    }
    if (p.empty()) throw DomainError(cond);
    if (p.size() == 1) return PsiFunction::degenerate(p[0], v[0]);
    const double B = std::isinf(zeta.upper()) ? kInfinity : std::numeric_limits<double>::quiet_NaN();
    return PsiFunction::tabulated(std::move(p), std::move(v), std::numeric_limits<double>::quiet_NaN(), B);
  }
  return PsiFunction::callable(
      [zeta, alpha](double p) { return zeta(p) * psi_alpha_coefficient(alpha, p); }, A, zeta.upper(),
      "psi_alpha");
}

CoefficientBound multidim_coefficient_bound(const FractionalIndex& alpha, double p) {
  const double a0 = alpha.alpha0();
  if (!(p > alpha.p0())) throw DomainError("coefficient needs p > p_0");
  CoefficientBound b{1.0, 1.0};
  for (double a : alpha.alpha) {
    b.exact *= (a + 1.0 / p) / (a - 1.0 / p);
    b.factored *= a > a0 ? (a + a0) / (a - a0) : (a0 + 1.0 / p) / (a0 - 1.0 / p);
  }
  return b;
}

}  // namespace fsgl
