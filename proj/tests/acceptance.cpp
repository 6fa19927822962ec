// Acceptance criteria: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "fsgl/certificates.hpp"
#include "fsgl/expression.hpp"
#include "fsgl/fenchel.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/psi.hpp"
#include "fsgl/random_fields.hpp"
#include "fsgl/young.hpp"

using namespace fsgl;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

char buf[512];

template <class... Args>
std::string format(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridFunction grid(const std::string& expr, int d, int n) {
  return sample_function(Expression::parse(expr).as_point_function(), d, n);
}

std::vector<double> dyadic(int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::ldexp(1.0, -k));
  return v;
}

// --------------------------------------------------------------------------

Outcome gagliardo_closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  const double exact = std::pow(1.0 / 3.0, 0.25);
  const GridFunction f = grid("x", 1, 4097);
  std::vector<double> err;
  for (int panels : {1, 2, 4}) {
    SeminormConfig cfg;
    cfg.panels_per_shell = panels;
    err.push_back(std::abs(gagliardo_seminorm_1d(f, 0.5, 4.0, cfg).value - exact) / exact);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok_default = err[0] <= 1e-3;
  const bool halves = err[1] <= 0.5 * err[0] && err[2] <= 0.5 * err[1];
  return {ok_default && halves && secs < 5.0,
          format("rel.err %.3e (default), %.3e, %.3e (mesh x2, x4); %.2f s", err[0], err[1], err[2], secs)};
}

Outcome degenerate_reduction() {
  const std::vector<std::string> corpus = {"x", "sin(3*x) + x", "exp(x) - 2", "abs(x - 0.3)^0.75", "x^2 - x"};
  double worst = 0.0;
  for (const auto& e : corpus) {
    const GridFunction f = grid(e, 1, 1025);
    for (double r : {2.0, 3.0}) {
      const double gl = grand_lebesgue_norm(f, PsiFunction::degenerate(r)).value;
      const double lp = lp_norm(f, r);
      worst = std::max(worst, std::abs(gl - lp) / lp);
    }
  }
  return {worst <= 1e-9, format("max rel. difference %.2e over 5 functions, r in {2,3}", worst)};
}

Outcome fundamental_pole_slope() {
  const PsiFunction psi = PsiFunction::power_pole(1.0, 1.0, 2.0, 4.0);
  std::vector<double> delta, phi;
  for (double d = 1e-6; d <= 1.0001e-2; d *= std::sqrt(10.0)) {
    delta.push_back(d);
    phi.push_back(fundamental_function(psi, d));
  }
  const double slope = fit_loglog_slope(delta, phi);
  const double target = 0.25;
  return {std::abs(slope - target) <= 0.02 * target,
          format("slope %.4f vs 1/B = %.4f over delta in [1e-6, 1e-2]", slope, target)};
}

Outcome fundamental_power_slope() {
  std::string detail;
  bool ok = true;
  for (double beta : {1.0, 2.0}) {
    const PsiFunction psi = PsiFunction::power(beta);
    std::vector<double> L, phi;
    for (double e = 4; e <= 40; e += 4) {
      const double d = std::pow(10.0, -e);
      L.push_back(-std::log(d));
      phi.push_back(fundamental_function(psi, d));
    }
    const double slope = fit_loglog_slope(L, phi);
    ok = ok && std::abs(slope + beta) <= 0.05 * beta;
    detail += format("%sbeta=%g slope %.4f", detail.empty() ? "" : ", ", beta, slope);
  }
  return {ok, detail + " (log phi vs log|log delta|, delta in [1e-40, 1e-4])"};
}

Outcome inequality_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> corpus = {
      "x", "x^2", "x^0.6", "sqrt(x)", "sin(2*pi*x)", "cos(5*x)", "exp(x)", "abs(x - 0.5)",
      "abs(x - 0.3)^0.75", "x*log(x + 1)", "sin(20*x)/4", "1/(1 + x^2)", "x^3 - x", "exp(-10*x)",
      "sqrt(abs(x - 0.5))", "sin(x)^2", "x^0.9*(1 - x)", "log(1 + x)", "max(x - 0.4, 0)", "x^0.3 + sin(7*x)"};
  const auto delta = dyadic(1, 8);
  int cells = 0, held = 0;
  double min_slack = INFINITY;
  std::string worst;
  for (const auto& e : corpus) {
    const GridFunction f = grid(e, 1, 1025);
    for (double alpha : {0.3, 0.5, 0.8})
      for (double p : {4.0, 8.0, 16.0}) {
        if (!(p * alpha > 1.0)) continue;
        const auto cert = certify_theorem_2_1(f, alpha, PsiFunction::degenerate(p), delta);
        for (std::size_t i = 0; i < cert.measured.size(); ++i) {
          ++cells;
          if (cert.measured[i] <= cert.bound[i] * 1.02) ++held;
        }
        if (cert.min_slack() < min_slack) {
          min_slack = cert.min_slack();
          worst = format("%s at alpha=%g p=%g", e.c_str(), alpha, p);
        }
      }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {held == cells && secs < 120.0,
          format("%d/%d cells hold; min slack %.3g (%s); %.1f s", held, cells, min_slack, worst.c_str(), secs)};
}

Outcome multidim_certificate() {
  const std::vector<std::string> corpus = {"x1^0.8 * sin(2*x2)", "x1 * x2", "sin(3*x1) * exp(x2)"};
  const std::vector<double> axis = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  std::vector<std::vector<double>> cells;
  for (double a : axis)
    for (double b : axis) cells.push_back({a, b});
  const FractionalIndex alpha = FractionalIndex::uniform(0.5, 2);
  int total = 0, held = 0;
  double min_slack = INFINITY;
  for (const auto& e : corpus) {
    const GridFunction f = grid(e, 2, 64);
    const NaturalZeta z = zeta_natural(f, alpha, {3.0, 4.0, 8.0});
    if (!z.psi) return {false, "no natural psi for " + e};
    const auto cert = certify_theorem_3_1(f, alpha, *z.psi, cells);
    for (std::size_t i = 0; i < cert.measured.size(); ++i) {
      ++total;
      if (cert.measured[i] <= cert.bound[i] * 1.02) ++held;
    }
    min_slack = std::min(min_slack, cert.min_slack());
  }
  return {held == total, format("%d/%d cells hold over %zu functions on 64x64, natural psi on {3,4,8}; min slack %.3g",
                                held, total, corpus.size(), min_slack)};
}

Outcome scaling_law() {
  const double alpha = 0.5, p = 4.0;
  const std::vector<std::string> corpus = {"x^2", "x", "sin(x)", "x^1.5"};
  bool ok = true;
  double lo = INFINITY, hi = -INFINITY, worst_slope = 0.0;
  for (const auto& e : corpus) {
    const Expression ex = Expression::parse(e);
    const ScalingTable t = scaling_experiment([ex](double x) { return ex(x); }, alpha, p, {1.0, 0.5, 0.25}, 2049);
    for (const auto& r : t.rows) {
      if (r.lambda == 1.0) continue;
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      ok = ok && r.ratio >= 0.99 && r.ratio <= 1.01;
    }
    const double dev = t.fitted_slope - (alpha - 1.0 / p);
    if (std::abs(dev) > std::abs(worst_slope)) worst_slope = dev;
    ok = ok && std::abs(dev) <= 0.01;
  }
  return {ok, format("ratios in [%.5f, %.5f]; worst slope deviation %.2e (expected slope %.3f)", lo, hi,
                     worst_slope, alpha - 1.0 / p)};
}

Outcome exactness() {
  const std::vector<double> Delta = {0.2, 0.1, 0.05};
  const auto delta = dyadic(1, 10);
  const ExactnessTable t = exactness_experiment(0.5, 4.0, delta, Delta, 4097);
  double vmin = INFINITY;
  for (const auto& r : t.rows) vmin = std::min(vmin, r.V);
  std::vector<double> at_min;
  for (double D : Delta)
    for (const auto& r : t.rows)
      if (r.Delta == D && r.delta == delta.back()) at_min.push_back(r.V);
  bool monotone = true;
  for (std::size_t i = 1; i < at_min.size(); ++i) monotone = monotone && at_min[i] < at_min[i - 1];
  const bool floor_ok = vmin >= 0.98;
  const bool target_ok = at_min.back() <= 1.05;
  return {floor_ok && monotone && target_ok,
          format("min V %.4f (>= 0.98: %s); V at delta=2^-10 for Delta 0.2,0.1,0.05: %.4f, %.4f, %.4f "
                 "(decreasing: %s, final <= 1.05: %s)",
                 vmin, floor_ok ? "yes" : "no", at_min[0], at_min[1], at_min[2], monotone ? "yes" : "no",
                 target_ok ? "yes" : "no")};
}

Outcome fenchel_machinery() {
  double bic = 0.0;
  const std::vector<std::function<double(double)>> fns = {
      [](double y) { return std::cosh(y); }, [](double y) { return y * y; },
      [](double y) { return std::exp(y); }, [](double y) { return std::pow(std::abs(y), 1.5); }};
  for (const auto& g : fns) {
    const auto s = ConvexSamples::tabulate(g, -3, 3, 601);
    const auto cc = conjugate_samples(conjugate_samples(s));
    for (std::size_t i = 0; i < cc.y.size(); ++i) bic = std::max(bic, std::abs(cc.g[i] - g(cc.y[i])) / (1 + std::abs(g(cc.y[i]))));
  }
  double fast = 0.0;
  for (const auto& g : fns) {
    const auto s = ConvexSamples::tabulate(g, -3, 3, 601);
    std::vector<double> xs;
    for (int i = 0; i <= 400; ++i) xs.push_back(-25 + 50.0 * i / 400);
    const auto lt = legendre_transform(s, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double b = legendre_brute(s, xs[i]);
      if (std::isinf(b) != std::isinf(lt[i])) fast = INFINITY;
      else if (std::isfinite(b)) fast = std::max(fast, std::abs(b - lt[i]) / (1 + std::abs(b)));
    }
  }
  double lo = INFINITY, hi = 0.0;
  std::vector<double> pg;
  for (int i = 0; i <= 40; ++i) pg.push_back(2.0 * std::pow(50.0, i / 40.0));
  for (double m : {1.0, 2.0, 4.0}) {
    auto cfg = default_orlicz_psi_config();
    cfg.p_grid = pg;
    const PsiFunction from_N = psi_from_orlicz(YoungFunction::exponential(m), cfg);
    const PsiFunction back = psi_from_orlicz(orlicz_from_psi(PsiFunction::power(1.0 / m)), cfg);
    for (double p : pg) {
      const double target = std::pow(p, 1.0 / m);
      for (double r : {from_N(p) / target, back(p) / target}) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  const bool ok = bic <= 1e-9 && fast <= 1e-9 && lo >= 0.25 && hi <= 4.0;
  return {ok, format("biconjugate err %.2e; linear vs brute %.2e; N_m ratios in [%.4f, %.4f] on p in [2,100]", bic,
                     fast, lo, hi)};
}

RandomFieldModel brownian() {
  RandomFieldModel m;
  m.n = (1 << 14) + 1;
  m.seed = 1;
  return m;
}

McConfig mc10k() {
  McConfig mc;
  mc.paths = 10000;
  mc.batches = 20;
  return mc;
}

Outcome brownian_moments() {
  const auto t0 = std::chrono::steady_clock::now();
  const RandomFieldModel model = brownian();
  const McConfig mc = mc10k();
  const int steps = model.n - 1;
  std::vector<std::vector<int>> gaps;
  for (int g = 1; g <= steps / 16; g *= 2) gaps.push_back({g});
  const GapMoments gm = mc_gap_moments(model, {4.0}, gaps, mc, 3);
  std::vector<double> u, m4;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    u.push_back(gaps[g][0] * gm.h);
    m4.push_back(gm.est[g][0].value);
  }
  const double exponent = fit_loglog_slope(u, m4);
  double intercept = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) intercept += (std::log(m4[i]) - exponent * std::log(u[i])) / u.size();
  const double prefactor = std::exp(intercept);
  const bool moment_ok = std::abs(exponent - 2.0) <= 0.05 && std::abs(prefactor - 3.0) <= 0.15;

  std::vector<std::vector<double>> cells;
  for (int k = 14; k >= 4; --k) cells.push_back({std::ldexp(1.0, -k)});
  const ModulusSamples ms = sample_moduli(model, cells, mc, 1);
  const double expected[3] = {0.25, 0.375, 0.4375};
  bool exps_ok = true, spread_ok = true;
  std::string spreads;
  int i = 0;
  for (double D : {1.0, 3.0, 7.0}) {
    const Thm42Report rep = thm42_experiment(model, brownian_thm42_params(D), cells, mc, &ms);
    exps_ok = exps_ok && rep.normalizer_exponent.at(0) == expected[i++];
    spread_ok = spread_ok && rep.spread < 10.0;
    spreads += format("%s%.3g", spreads.empty() ? "" : ", ", rep.spread);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {moment_ok && exps_ok && spread_ok && secs < 180.0,
          format("4th moment exponent %.4f, prefactor %.4f; normalizer exponents exact: %s; R spreads %s; %.0f s",
                 exponent, prefactor, exps_ok ? "yes" : "no", spreads.c_str(), secs)};
}

Outcome tail_validity() {
  const TailReport rep = tail_report(brownian(), FractionalIndex::uniform(0.4, 1), 4.0, {0.0625},
                                     {0.5, 1, 2, 4, 8, 16, 32, 64, 128, 256},
                                     {2.75, 3, 3.5, 4, 5, 6, 8, 10, 12, 16}, mc10k());
  int valid = 0, applied = 0;
  double tightest = INFINITY;
  for (const auto& r : rep.rows) {
    valid += r.valid;
    applied += r.applied;
    if (r.applied && r.bound < 2.0) tightest = std::min(tightest, r.bound);
  }
  return {valid == static_cast<int>(rep.rows.size()),
          format("%d/%zu thresholds within bound + 3 SE (%d where the bound applies; smallest nontrivial bound %.3g)",
                 valid, rep.rows.size(), applied, tightest)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1  Gagliardo closed form for f(x)=x", gagliardo_closed_form},
      {"2  degenerate psi reduces to the Lp norm", degenerate_reduction},
      {"3a fundamental function slope 1/B (power-pole psi)", fundamental_pole_slope},
      {"3b fundamental function slope -beta (power psi)", fundamental_power_slope},
      {"4  one-dimensional inequality suite", inequality_suite},
      {"5  multidimensional certificate", multidim_certificate},
      {"6  scaling law", scaling_law},
      {"7  exactness ratio", exactness},
      {"8  Fenchel and Orlicz machinery", fenchel_machinery},
      {"9  Brownian moments and log-modulus normalizers", brownian_moments},
      {"10 tail validity", tail_validity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
