#pragma once

#include <variant>
#include <vector>

#include "fsgl/fenchel.hpp"
#include "fsgl/psi.hpp"

namespace fsgl {

/// An even Young-Orlicz function Phi with Phi(0) = 0, increasing on u > 0.
class YoungFunction {
 public:
  /// |u|^exponent.
  struct Power {
    double exponent;
  };
  /// exp(|u|^m / m) - 1; its exponential representative is mu(u) = u^m / m.
  struct Exponential {
    double m;
  };
  /// exp(mu(|u|)) for |u| > patch_radius and C u^2 below, C set by
  /// continuity. mu is tabulated at log-spaced nodes u_i and interpolated
  /// linearly in (log u, mu). patch_radius must be positive.
  struct ExpOfMu {
    std::vector<double> u;
    std::vector<double> mu;
    double patch_radius;
  };
  /// Convex samples (u_i, Phi_i) with u_0 = 0, Phi_0 = 0, linearly
  /// interpolated and extended past the last node with the last slope.
  struct Tabulated {
    std::vector<double> u;
    std::vector<double> phi;
  };
  using Rule = std::variant<Power, Exponential, ExpOfMu, Tabulated>;

  static YoungFunction power(double exponent);
  static YoungFunction exponential(double m);
  static YoungFunction exp_of_mu(std::vector<double> u, std::vector<double> mu,
                                 double patch_radius = 3.0);
  static YoungFunction tabulated(std::vector<double> u, std::vector<double> phi,
                                 double growth_factor = 10.0);

  double operator()(double u) const;

  /// Smallest u >= 0 with Phi(u) = y, by bisection (relative tolerance
  /// 1e-10, at most 200 iterations). Throws if Phi cannot reach y.
  double inverse(double y) const;

  /// mu(u) = log Phi(u) in the exponential representation, for u > 0.
  /// Throws DomainError for rules that are not of exponential type.
  double log_representative(double u) const;
  bool is_exponential_type() const;

  const Rule& rule() const { return rule_; }
  /// Constant C of the quadratic patch (ExpOfMu only; 0 otherwise).
  double patch_coefficient() const { return patch_c_; }

 private:
  explicit YoungFunction(Rule r);
  Rule rule_;
  double patch_c_ = 0.0;
};

/// phi(L(Phi), delta) = delta * Phi^{-1}(1/delta), delta in (0,1].
double orlicz_fundamental(const YoungFunction& phi, double delta);

struct OrliczPsiConfig {
  /// Exponents at which psi_{N} is tabulated.
  std::vector<double> p_grid;
  /// x = log u grid for the conjugate of log N(e^x).
  double x_lo = -20.0;
  double x_hi = 20.0;
  int x_nodes = 8001;
};

/// psi_{N}(p) = exp([log N(e^x)]^*(p) / p), tabulated on cfg.p_grid. Grid
/// points where the conjugate is infinite or non-positive are dropped; the
/// call fails if none survive.
PsiFunction psi_from_orlicz(const YoungFunction& N, const OrliczPsiConfig& cfg);
OrliczPsiConfig default_orlicz_psi_config();

struct PsiOrliczConfig {
  /// Exponent grid on which p log psi(p) is tabulated: log-spaced from just
  /// above A up to p_max.
  double p_max = 1e4;
  int p_nodes = 4001;
  double patch_radius = 3.0;
  /// Replace p log psi(p) by its convex envelope instead of failing.
  bool convexify = false;
};

/// N(u) = exp(psi~*(log|u|)) for |u| > 3, C u^2 below, psi~(p) = p log psi(p).
/// Requires an unbounded support (B = inf).
YoungFunction orlicz_from_psi(const PsiFunction& psi, const PsiOrliczConfig& cfg = {});

}  // namespace fsgl
