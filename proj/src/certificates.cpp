#include "fsgl/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "fsgl/error.hpp"
#include "fsgl/quadrature.hpp"

namespace fsgl {

namespace {

double product(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 1.0, std::multiplies<>());
}

double delta_alpha(const FractionalIndex& alpha, const std::vector<double>& delta) {
  double r = 1.0;
  for (int k = 0; k < alpha.dim(); ++k) r *= std::pow(delta[k], alpha.alpha[k]);
  return r;
}

void check_delta(const std::vector<double>& delta, int d) {
  if (static_cast<int>(delta.size()) != d) throw DomainError("delta vector has the wrong dimension");
  for (double x : delta)
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("delta components must lie in (0,1]");
}

std::string psi_label(const PsiFunction& psi) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PsiFunction::PowerPole>) return "power_pole";
        if constexpr (std::is_same_v<T, PsiFunction::Power>) return "power";
        if constexpr (std::is_same_v<T, PsiFunction::Degenerate>) return "degenerate r=" + std::to_string(r.r);
        if constexpr (std::is_same_v<T, PsiFunction::Constant>) return "constant";
        if constexpr (std::is_same_v<T, PsiFunction::Tabulated>) return "tabulated";
        if constexpr (std::is_same_v<T, PsiFunction::Callable>) return r.label;
      },
      psi.rule());
}

double measured_modulus(const GridFunction& f, const std::vector<double>& delta,
                        const RectangleModulusTable* table) {
  if (f.dim() == 1) return modulus_of_continuity(f, delta[0]);
  return (*table)(delta);
}

}  // namespace

bool ContinuityCertificate::all_hold() const {
  return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

double ContinuityCertificate::min_slack() const {
  double m = kInfinity;
  for (double s : slack) m = std::min(m, s);
  return m;
}

void ContinuityCertificate::push(std::vector<double> d, double measured_value, double bound_value) {
  delta.push_back(std::move(d));
  measured.push_back(measured_value);
  bound.push_back(bound_value);
  slack.push_back(measured_value > 0.0 ? bound_value / measured_value : kInfinity);
  holds.push_back(measured_value <= bound_value * (1.0 + tolerance));
}

double grr_bound_1d(double alpha, double p, double delta, double seminorm) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(p * alpha > 1.0)) throw DomainError("GRR bound needs p > 1/alpha");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  return 8.0 * std::pow(4.0, 1.0 / p) * (alpha + 1.0 / p) / (alpha - 1.0 / p) *
         std::pow(delta, alpha - 1.0 / p) * seminorm;
}

double grr_bound_nd(const FractionalIndex& alpha, double p, const std::vector<double>& delta, double seminorm) {
  if (!(p > alpha.p0())) throw DomainError("GRR bound needs p > p_0");
  if (static_cast<int>(delta.size()) != alpha.dim()) throw DomainError("delta vector has the wrong dimension");
  for (double x : delta)
    if (!(x > 0.0)) throw DomainError("delta components must be positive");
  return psi_alpha_coefficient(alpha, p) * delta_alpha(alpha, delta) * std::pow(product(delta), -1.0 / p) *
         seminorm;
}

TheoremBound::TheoremBound(const GridFunction& f, const FractionalIndex& alpha, const PsiFunction& psi,
                           const CertificateConfig& cfg)
    : alpha_(alpha), psi_alpha_(psi_alpha(psi, alpha)), search_(cfg.search) {
  if (alpha.dim() != f.dim()) throw DomainError("fractional index dimension does not match the function");
  const double p0 = alpha.p0();
  if (const auto* dg = std::get_if<PsiFunction::Degenerate>(&psi.rule())) {
    p_grid_ = {dg->r};
  } else if (const auto* tab = std::get_if<PsiFunction::Tabulated>(&psi.rule())) {
    for (double p : tab->p)
      if (p > p0) p_grid_.push_back(p);
  } else {
    p_grid_ = default_p_grid(alpha, cfg.seminorm, psi.lower(), psi.upper());
  }
  for (double p : p_grid_) {
    const double ps = psi(p);
    if (!std::isfinite(ps)) continue;
    const auto z = gagliardo_seminorm_nd(f, alpha, p, cfg.seminorm);
    if (z.status == SeminormStatus::divergent) {
      norm_ = kInfinity;
      break;
    }
    norm_ = std::max(norm_, z.value / ps);
  }
}

double TheoremBound::operator()(const std::vector<double>& delta) const {
  check_delta(delta, alpha_.dim());
  if (norm_ == 0.0) return 0.0;
  const double phi = fundamental_function(psi_alpha_, product(delta), search_);
  return delta_alpha(alpha_, delta) * norm_ / phi;
}

ContinuityCertificate certify_theorem_2_1(const GridFunction& f, double alpha, const PsiFunction& psi,
                                          const std::vector<double>& delta_grid, const CertificateConfig& cfg) {
  if (f.dim() != 1) throw DomainError("one-dimensional certificates need a one-dimensional function");
  std::vector<std::vector<double>> cells;
  for (double d : delta_grid) cells.push_back({d});
  auto cert = certify_theorem_3_1(f, FractionalIndex({alpha}), psi, cells, cfg);
  cert.theorem = "theorem_2_1";
  return cert;
}

ContinuityCertificate certify_theorem_3_1(const GridFunction& f, const FractionalIndex& alpha,
                                          const PsiFunction& psi,
                                          const std::vector<std::vector<double>>& delta_grid,
                                          const CertificateConfig& cfg) {
  if (delta_grid.empty()) throw DomainError("certificate needs a non-empty delta grid");
  for (const auto& d : delta_grid) check_delta(d, f.dim());
  ContinuityCertificate cert;
  cert.theorem = "theorem_3_1";
  cert.tolerance = cfg.tolerance;
  cert.alpha = alpha.alpha;
  cert.psi_label = psi_label(psi);
  const TheoremBound tb(f, alpha, psi, cfg);
  cert.norm = tb.norm();
  cert.norm_p_grid = tb.norm_p_grid();
  cert.notes["coefficient_placement"] =
      "psi_alpha = psi * 8^d 4^{d/p} prod (alpha_k+1/p)/(alpha_k-1/p); norm = sup_p zeta(p)/psi(p)";
  std::unique_ptr<RectangleModulusTable> table;
  if (f.dim() > 1) table = std::make_unique<RectangleModulusTable>(f, cfg.seminorm.limits);
  for (const auto& d : delta_grid) cert.push(d, measured_modulus(f, d, table.get()), tb(d));
  return cert;
}

ContinuityCertificate certify_inf_over_alpha(const GridFunction& f, const std::vector<double>& alpha_grid,
                                             const PsiProvider& provider, const std::vector<double>& delta_grid,
                                             const CertificateConfig& cfg) {
  if (alpha_grid.empty()) throw DomainError("inf-over-alpha needs a non-empty alpha grid");
  if (f.dim() != 1) throw DomainError("inf-over-alpha certificates need a one-dimensional function");
  for (double d : delta_grid) check_delta({d}, 1);
  std::vector<TheoremBound> bounds;
  for (double a : alpha_grid) bounds.emplace_back(f, FractionalIndex({a}), provider(a), cfg);
  ContinuityCertificate cert;
  cert.theorem = "inf_over_alpha";
  cert.tolerance = cfg.tolerance;
  cert.alpha = alpha_grid;
  cert.extra_name = "argmin_alpha";
  for (double d : delta_grid) {
    double best = kInfinity, arg = alpha_grid.front();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      const double b = bounds[i]({d});
      if (b < best) {
        best = b;
        arg = alpha_grid[i];
      }
    }
    cert.push({d}, modulus_of_continuity(f, d), best);
    cert.extra.push_back(arg);
  }
  return cert;
}

DistanceMajorant DistanceMajorant::power(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("power majorant needs gamma > 0");
  return {[gamma](double u) { return std::pow(u, gamma); },
          [gamma](double u) { return gamma * std::pow(u, gamma - 1.0); }, "u^" + std::to_string(gamma)};
}

namespace {

struct GradedIntegral {
  double value;
  bool divergent;
};

/// Integral over (0, top] of g(u) du with geometric shells in s = log u and a
/// power-law tail fitted at the innermost edge.
template <class G>
GradedIntegral graded_integral(G&& g, double top, const OrliczGrrConfig& cfg) {
  const auto& rule = gauss_legendre(2);
  const double rho = cfg.grading_ratio;
  double sum = 0.0, hi = top;
  for (int m = 0; m < cfg.shells; ++m) {
    const double lo = hi * rho;
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double s = a + 0.5 * (b - a) * (rule.x[q] + 1.0);
      const double u = std::exp(s);
      const auto v = g(u);
      if (v.divergent) return {kInfinity, true};
      sum += 0.5 * (b - a) * rule.w[q] * u * v.value;
    }
    hi = lo;
  }
  const auto ga = g(hi), gb = g(hi / rho);
  if (ga.divergent || gb.divergent) return {kInfinity, true};
  const double Ha = ga.value * hi, Hb = gb.value * hi / rho;
  if (Ha > 0.0 && Hb > 0.0) {
    const double e = std::log(Hb / Ha) / std::log(1.0 / rho);
    if (e <= cfg.divergence_margin) return {kInfinity, true};
    sum += Ha / e;
  }
  return {sum, false};
}

}  // namespace

OrliczGrrResult orlicz_grr_bound(const YoungFunction& phi, const std::vector<DistanceMajorant>& p_k,
                                 double B_value, const std::vector<double>& delta, const OrliczGrrConfig& cfg) {
  const int d = static_cast<int>(delta.size());
  if (d < 1 || static_cast<int>(p_k.size()) != d) throw DomainError("need one majorant per delta component");
  if (!(B_value >= 0.0)) throw DomainError("B must be non-negative");
  for (double x : delta)
    if (!(x > 0.0)) throw DomainError("delta components must be positive");
  OrliczGrrResult res;
  if (B_value == 0.0) return res;
  const double scale = std::pow(4.0, d) * B_value;
  std::vector<double> u(d);
  auto level = [&](auto&& self, int k) -> GradedIntegral {
    if (k == d) {
      double den = 1.0;
      for (double x : u) den *= x * x;
      return {phi.inverse(scale / den), false};
    }
    return graded_integral(
        [&](double x) -> GradedIntegral {
          u[k] = x;
          const auto inner = self(self, k + 1);
          if (inner.divergent) return inner;
          return {inner.value * p_k[k].derivative(x), false};
        },
        delta[k], cfg);
  };
  const auto total = level(level, 0);
  if (total.divergent) {
    res.status = SeminormStatus::divergent;
    res.value = kInfinity;
    return res;
  }
  res.value = std::pow(8.0, d) * total.value;
  return res;
}

double luxemburg_norm(const GridFunction& f, const YoungFunction& N) {
  const auto mids = cell_midpoint_values(f);
  double M = 0.0;
  for (double v : mids) M = std::max(M, std::abs(v));
  if (M == 0.0) return 0.0;
  auto mean_at = [&](double k) {
    double s = 0.0;
    for (double v : mids) s += N(v / k);
    return s / static_cast<double>(mids.size());
  };
  double lo = M, hi = M;
  int guard = 0;
  while (mean_at(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 2000) throw DomainError("Luxemburg norm bracket failed");
  }
  while (mean_at(lo) <= 1.0) {
    lo *= 0.5;
    if (++guard > 4000) throw DomainError("Luxemburg norm bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

OrliczSobolevBound fractional_orlicz_sobolev_bound(const GridFunction& f, const FractionalIndex& alpha,
                                                   const std::vector<std::vector<double>>& delta_grid,
                                                   const PsiFunction& tau, const CertificateConfig& cfg) {
  if (!std::isinf(tau.upper()))
    throw DomainError("tau must have support (A, inf): the exponential Orlicz function needs B = inf");
  for (const auto& d : delta_grid) check_delta(d, f.dim());
  PsiOrliczConfig oc;
  oc.convexify = true;
  const auto N = orlicz_from_psi(tau, oc);
  OrliczSobolevBound out;
  out.orlicz_norm = luxemburg_norm(f, N);
  std::unique_ptr<RectangleModulusTable> table;
  if (f.dim() > 1) table = std::make_unique<RectangleModulusTable>(f, cfg.seminorm.limits);
  for (const auto& d : delta_grid) {
    const double core =
        out.orlicz_norm == 0.0 ? 0.0
                               : delta_alpha(alpha, d) * out.orlicz_norm / fundamental_function(tau, product(d), cfg.search);
    out.core.push_back(core);
    const double m = measured_modulus(f, d, table.get());
    if (m > 0.0) out.fitted_constant = std::max(out.fitted_constant, core > 0.0 ? m / core : kInfinity);
  }
  return out;
}

OrliczSobolevInf fractional_orlicz_sobolev_inf(const GridFunction& f, const std::vector<FractionalIndex>& alphas,
                                               const std::vector<PsiFunction>& taus,
                                               const std::vector<std::vector<double>>& delta_grid,
                                               const CertificateConfig& cfg) {
  if (alphas.empty() || alphas.size() != taus.size())
    throw DomainError("need one tau per alpha vector and a non-empty grid");
  OrliczSobolevInf out;
  out.core.assign(delta_grid.size(), kInfinity);
  out.argmin.assign(delta_grid.size(), 0);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto b = fractional_orlicz_sobolev_bound(f, alphas[i], delta_grid, taus[i], cfg);
    for (std::size_t c = 0; c < delta_grid.size(); ++c)
      if (b.core[c] < out.core[c]) {
        out.core[c] = b.core[c];
        out.argmin[c] = i;
      }
  }
  return out;
}

ExactnessTable exactness_experiment(double alpha, double p, const std::vector<double>& delta_list,
                                    const std::vector<double>& Delta_list, int n, const SeminormConfig& cfg) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(alpha - 1.0 / p > 0.0)) throw DomainError("exactness needs alpha - 1/p > 0");
  const double Dmax = 1.0 - alpha + 1.0 / p;
  for (double D : Delta_list)
    if (!(D > 0.0 && D < Dmax))
      throw DomainError("Delta = " + std::to_string(D) + " lies outside (0, 1 - alpha + 1/p) = (0, " +
                        std::to_string(Dmax) + ")");
  for (double d : delta_list)
    if (!(d > 0.0 && d <= 1.0)) throw DomainError("delta must lie in (0,1]");
  ExactnessTable t;
  t.alpha = alpha;
  t.p = p;
  const FractionalIndex a({alpha});
  const auto psi_a = psi_alpha(PsiFunction::degenerate(p), a);
  for (double D : Delta_list) {
    const double beta = alpha - 1.0 / p + D;
    auto fD = [beta](double x) { return std::pow(x, beta); };
    const auto w = gagliardo_seminorm_1d(fD, alpha, p, cfg);
    t.seminorm[D] = w.value;
    t.status[D] = w.status;
    const auto grid = sample_function([&](std::span<const double> x) { return fD(x[0]); }, 1, n);
    for (double d : delta_list) {
      const double om = modulus_of_continuity(grid, d);
      const double bound = std::pow(d, alpha) / fundamental_function(psi_a, d) * w.value;
      t.rows.push_back({D, d, om, bound, std::abs(std::log(om)) / std::abs(std::log(bound))});
    }
  }
  return t;
}

double half_line_seminorm(const GridFunction& f, double alpha, double p, const SeminormConfig& cfg) {
  const auto in = gagliardo_seminorm_1d(f, alpha, p, cfg);
  if (in.status == SeminormStatus::divergent) return kInfinity;
  const double ext = gagliardo_exterior_power_1d(f, alpha, p);
  return std::pow(std::pow(in.value, p) + ext, 1.0 / p);
}

ScalingTable scaling_experiment(const std::function<double(double)>& f, double alpha, double p,
                                const std::vector<double>& lambda_list, int n, const SeminormConfig& cfg) {
  if (lambda_list.empty()) throw DomainError("scaling needs at least one lambda");
  ScalingTable t;
  t.alpha = alpha;
  t.p = p;
  t.base_norm = half_line_seminorm(dilate(f, 1.0, n, 2.0), alpha, p, cfg);
  std::vector<double> xs, ys;
  for (double lam : lambda_list) {
    if (!(lam > 0.0 && lam <= 1.0)) throw DomainError("lambda must lie in (0,1]");
    const int nl = static_cast<int>(std::lround((n - 1) / lam)) + 1;
    const double norm = half_line_seminorm(dilate(f, lam, nl, 2.0 / lam), alpha, p, cfg);
    const double expected = std::pow(lam, alpha - 1.0 / p) * t.base_norm;
    t.rows.push_back({lam, norm, expected, norm / expected});
    xs.push_back(lam);
    ys.push_back(norm / t.base_norm);
  }
  t.fitted_slope = xs.size() >= 2 ? fit_loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  return t;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs two or more points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace fsgl
