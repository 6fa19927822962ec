#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fsgl/grid_function.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/psi.hpp"
#include "fsgl/young.hpp"

namespace fsgl {

/// Measured modulus against a theoretical bound over a grid of delta cells.
struct ContinuityCertificate {
  std::string theorem;
  /// One delta vector per cell (length 1 in one dimension).
  std::vector<std::vector<double>> delta;
  std::vector<double> measured;
  std::vector<double> bound;
  /// bound / measured; +inf where the measured modulus is zero.
  std::vector<double> slack;
  std::vector<bool> holds;
  /// A cell holds when measured <= bound * (1 + tolerance).
  double tolerance = 0.02;
  std::vector<double> alpha;
  std::string psi_label;
  /// ||f|| S(alpha, psi) = sup_p zeta(p) / psi(p): the Grand Lebesgue norm
  /// of f with respect to psi_alpha = coefficient * psi.
  double norm = 0.0;
  /// Exponents at which the norm was evaluated.
  std::vector<double> norm_p_grid;
  /// Optional per-cell extra column (e.g. the minimising alpha).
  std::string extra_name;
  std::vector<double> extra;
  std::map<std::string, double> constants;
  std::map<std::string, std::string> notes;

  bool all_hold() const;
  double min_slack() const;
  void push(std::vector<double> d, double measured_value, double bound_value);
};

struct CertificateConfig {
  SeminormConfig seminorm;
  ExponentSearchConfig search;
  double tolerance = 0.02;
};

/// 8 4^{1/p} (alpha + 1/p)/(alpha - 1/p) delta^{alpha - 1/p} seminorm.
double grr_bound_1d(double alpha, double p, double delta, double seminorm);
/// 8^d 4^{d/p} prod (alpha_k+1/p)/(alpha_k-1/p) prod delta_k^{alpha_k} (prod delta_k)^{-1/p} seminorm.
double grr_bound_nd(const FractionalIndex& alpha, double p, const std::vector<double>& delta, double seminorm);

/// The modulus bound for f, alpha and a majorant psi of zeta: the norm and
/// psi_alpha are computed once and reused for every delta.
class TheoremBound {
 public:
  TheoremBound(const GridFunction& f, const FractionalIndex& alpha, const PsiFunction& psi,
               const CertificateConfig& cfg = {});
  /// delta^alpha * norm / phi(G psi_alpha, prod delta_k).
  double operator()(const std::vector<double>& delta) const;
  double norm() const { return norm_; }
  const PsiFunction& psi_alpha_function() const { return psi_alpha_; }
  const std::vector<double>& norm_p_grid() const { return p_grid_; }

 private:
  FractionalIndex alpha_;
  PsiFunction psi_alpha_;
  double norm_ = 0.0;
  std::vector<double> p_grid_;
  ExponentSearchConfig search_;
};

ContinuityCertificate certify_theorem_2_1(const GridFunction& f, double alpha, const PsiFunction& psi,
                                          const std::vector<double>& delta_grid,
                                          const CertificateConfig& cfg = {});

ContinuityCertificate certify_theorem_3_1(const GridFunction& f, const FractionalIndex& alpha,
                                          const PsiFunction& psi,
                                          const std::vector<std::vector<double>>& delta_grid,
                                          const CertificateConfig& cfg = {});

/// Supplies the majorant psi used for a given alpha.
using PsiProvider = std::function<PsiFunction(double alpha)>;

/// min over the alpha grid of the one-dimensional bound; the minimising alpha is
/// stored per cell in `extra`.
ContinuityCertificate certify_inf_over_alpha(const GridFunction& f, const std::vector<double>& alpha_grid,
                                             const PsiProvider& provider,
                                             const std::vector<double>& delta_grid,
                                             const CertificateConfig& cfg = {});

/// A strictly increasing continuous p_k with p_k(0) = 0 and its derivative.
struct DistanceMajorant {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string label;

  static DistanceMajorant power(double gamma);
};

struct OrliczGrrResult {
  double value = 0.0;
  SeminormStatus status = SeminormStatus::ok;
};

struct OrliczGrrConfig {
  double grading_ratio = 0.75;
  int shells = 120;
  double divergence_margin = 1e-6;
};

/// 8^d times the integral over prod [0, delta_k] of
/// Phi^{-1}(4^d B / prod u_k^2) dp_1(u_1)...dp_d(u_d), graded toward 0 with a
/// fitted power-law tail on every axis.
OrliczGrrResult orlicz_grr_bound(const YoungFunction& phi, const std::vector<DistanceMajorant>& p_k,
                                 double B_value, const std::vector<double>& delta,
                                 const OrliczGrrConfig& cfg = {});

/// Luxemburg norm inf{k > 0 : mean over the box of N(f/k) <= 1}, with the
/// multilinear interpolant sampled at cell midpoints.
double luxemburg_norm(const GridFunction& f, const YoungFunction& N);

struct OrliczSobolevBound {
  /// delta^alpha * ||f|| L(N_alpha) / phi(G tau, prod delta_k), without C.
  std::vector<double> core;
  double orlicz_norm = 0.0;
  /// Smallest C with measured <= C * core on the supplied cells.
  double fitted_constant = 0.0;
};

/// Orlicz-Sobolev bound core for tau (support (A, inf)); N_alpha comes from
/// orlicz_from_psi on tau.
OrliczSobolevBound fractional_orlicz_sobolev_bound(const GridFunction& f, const FractionalIndex& alpha,
                                                   const std::vector<std::vector<double>>& delta_grid,
                                                   const PsiFunction& tau, const CertificateConfig& cfg = {});

struct OrliczSobolevInf {
  std::vector<double> core;
  std::vector<std::size_t> argmin;
};

/// Cellwise minimum of the Orlicz-Sobolev core over an
/// alpha-vector grid, each entry with its own tau.
OrliczSobolevInf fractional_orlicz_sobolev_inf(const GridFunction& f,
                                               const std::vector<FractionalIndex>& alphas,
                                               const std::vector<PsiFunction>& taus,
                                               const std::vector<std::vector<double>>& delta_grid,
                                               const CertificateConfig& cfg = {});

struct ExactnessRow {
  double Delta;
  double delta;
  double omega;
  double bound;
  double V;
};

struct ExactnessTable {
  double alpha = 0.0, p = 0.0;
  std::vector<ExactnessRow> rows;
  std::map<double, double> seminorm;  // per Delta
  std::map<double, SeminormStatus> status;
};

/// V(f_Delta, delta) = |log omega| / |log bound| for f_Delta(x) = x^{alpha - 1/p + Delta}
/// with the one-dimensional bound for psi_(p). The modulus is measured on a
/// lattice of `n` points; the seminorm uses the exact f_Delta.
ExactnessTable exactness_experiment(double alpha, double p, const std::vector<double>& delta_list,
                                    const std::vector<double>& Delta_list, int n = 4097,
                                    const SeminormConfig& cfg = {});

struct ScalingRow {
  double lambda;
  double norm;      // ||T_lambda f|| U(alpha, p)
  double expected;  // lambda^{alpha - 1/p} ||f|| U(alpha, p)
  double ratio;
};

struct ScalingTable {
  double alpha = 0.0, p = 0.0;
  double base_norm = 0.0;
  std::vector<ScalingRow> rows;
  /// Least-squares slope of log(norm/base) against log(lambda).
  double fitted_slope = 0.0;
};

/// Half-line seminorm U(alpha,p) of the tapered extension of f and of its
/// dilations, each on the box [0, 2/lambda] at spacing 2/(n-1).
ScalingTable scaling_experiment(const std::function<double(double)>& f, double alpha, double p,
                                const std::vector<double>& lambda_list, int n = 2049,
                                const SeminormConfig& cfg = {});

/// ||f|| U(alpha,p) for a grid function on [0, L] extended by zero.
double half_line_seminorm(const GridFunction& f, double alpha, double p, const SeminormConfig& cfg = {});

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fsgl
