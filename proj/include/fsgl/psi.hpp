#pragma once

#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "fsgl/exponent_search.hpp"

namespace fsgl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A weight over an interval of integrability exponents, psi in Psi(A,B).
///
/// psi(p) is finite and strictly positive on the open support (A,B) and
/// equals the infinite sentinel outside it. The degenerate rule psi_(r) is
/// finite at the single point p = r. Tabulated rules interpolate linearly in
/// (p, log psi) and answer only on the closed hull of their nodes; a query
/// inside (A,B) but outside the hull raises HullError.
class PsiFunction {
 public:
  /// (p-A)^{-a} (B-p)^{-b} on (A,B), B finite.
  struct PowerPole {
    double a, b;
  };
  /// p^beta.
  struct Power {
    double beta;
  };
  /// `value` at p = r, infinite elsewhere.
  struct Degenerate {
    double r;
    double value;
  };
  struct Constant {
    double value;
  };
  struct Tabulated {
    std::vector<double> p;
    std::vector<double> value;
  };
  /// Closed-form rule supplied by the caller; not serialisable.
  struct Callable {
    std::function<double(double)> fn;
    std::string label;
  };
  using Rule = std::variant<PowerPole, Power, Degenerate, Constant, Tabulated, Callable>;

  static PsiFunction power_pole(double a, double b, double A, double B);
  static PsiFunction power(double beta, double A = 1.0, double B = kInfinity);
  static PsiFunction degenerate(double r, double value = 1.0);
  static PsiFunction constant(double value, double A, double B);
  /// Nodes must be strictly increasing with finite positive values. The
  /// support defaults to the node hull; pass `B = kInfinity` to record that
  /// the tabulated function is a truncation of one with unbounded support.
  static PsiFunction tabulated(std::vector<double> p, std::vector<double> value,
                               double A = std::numeric_limits<double>::quiet_NaN(),
                               double B = std::numeric_limits<double>::quiet_NaN());
  static PsiFunction callable(std::function<double(double)> fn, double A, double B,
                              std::string label = "callable");

  /// psi(p); kInfinity off support. Requires finite p.
  double operator()(double p) const;

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  const Rule& rule() const { return rule_; }
  bool is_degenerate() const { return std::holds_alternative<Degenerate>(rule_); }
  bool is_tabulated() const { return std::holds_alternative<Tabulated>(rule_); }

  /// Exponent interval swept by sup-over-p solvers: the open support for
  /// closed-form rules, the closed node hull for tabulated ones.
  ExponentInterval scan_interval() const;

  /// Checks inf psi > 0 on a dense grid of the scan interval.
  void check_invariants() const;

 private:
  PsiFunction(Rule rule, double A, double B);
  Rule rule_;
  double lower_;
  double upper_;
};

struct FundamentalValue {
  double value;
  double argmax_p;
};

/// phi(G psi, delta) = sup_{p in supp psi} delta^{1/p} / psi(p).
double fundamental_function(const PsiFunction& psi, double delta,
                            const ExponentSearchConfig& cfg = {});
FundamentalValue fundamental_function_argmax(const PsiFunction& psi, double delta,
                                             const ExponentSearchConfig& cfg = {});

/// phi_q(G psi, delta) = sup_{p in (q,B)} delta^{1/p} / psi(p), A < q < B.
double truncated_fundamental_function(const PsiFunction& psi, double q, double delta,
                                      const ExponentSearchConfig& cfg = {});

/// psi~*(s) = sup_p (p s - p log psi(p)), the conjugate of p log psi(p)
/// over the support of psi. May be +inf.
double psi_tilde_conjugate(const PsiFunction& psi, double s, const ExponentSearchConfig& cfg = {});

/// Tail bound P(|eta| > z) <= 2 exp(-psi~*(log(z / norm))) for z >= norm,
/// where norm = ||eta|| G psi. Result is clipped to (0,2].
double tail_bound_from_psi(const PsiFunction& psi, double norm, double z,
                           const ExponentSearchConfig& cfg = {});

/// psi_F(p_i) = max over curves of curve[i]; every curve is a list of
/// L_p norms at the nodes of `p_grid`.
PsiFunction natural_function_from_family(const std::vector<double>& p_grid,
                                         const std::vector<std::vector<double>>& curves);

}  // namespace fsgl
