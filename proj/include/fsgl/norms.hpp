#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fsgl/grid_function.hpp"
#include "fsgl/psi.hpp"

namespace fsgl {

struct SeminormConfig {
  /// Geometric ratio of the diagonal mesh in u = |y - x|.
  double grading_ratio = 0.75;
  int shells = 200;
  /// Gauss panels per shell; doubling it doubles the mesh.
  int panels_per_shell = 1;
  /// Gauss nodes per inner panel for callable functions.
  int resolution = 16;
  /// Callable route: the u-mesh stops at u_cut * extent and the rest is a
  /// power-law tail fitted from the last two shells.
  double callable_u_cut = 1e-7;
  /// Multidimensional route: shells stop this many ratios below h.
  int nd_shells_below_h = 8;
  bool allow_d3 = false;
  /// A tail exponent margin gamma - alpha p below this marks divergence.
  double divergence_margin = 1e-6;
  /// Default p-grid: p_nodes log-spaced on (A(alpha) + p_offset, min(B, p_cap)).
  int p_nodes = 64;
  double p_offset = 1e-3;
  double p_cap = 1e3;
  GridLimits limits;

  void validate() const;
};

enum class SeminormStatus { ok, divergent };
std::string to_string(SeminormStatus s);

struct SeminormResult {
  double value = 0.0;
  SeminormStatus status = SeminormStatus::ok;
  /// Fraction of the p-th power contributed by the fitted tail below the mesh.
  double tail_fraction = 0.0;
  /// Fitted exponent gamma of J(u) ~ u^gamma below the mesh.
  double tail_exponent = 0.0;
};

/// Composite midpoint rule for |f|^p on the multilinear interpolant, then
/// the p-th root; cell midpoints take the mean of the cell corners.
double lp_norm(const GridFunction& f, double p);
/// Multilinear interpolant at the cell midpoints, row-major.
std::vector<double> cell_midpoint_values(const GridFunction& f);

struct GrandLebesgueResult {
  double value = 0.0;
  double argmax_p = 0.0;
  /// The supremum is approached only as p -> B.
  bool divergent_at_upper = false;
};

/// sup_p |f|_p / psi(p).
GrandLebesgueResult grand_lebesgue_norm(const GridFunction& f, const PsiFunction& psi,
                                        const ExponentSearchConfig& cfg = {});
/// The same supremum for a p -> |f|_p curve.
GrandLebesgueResult grand_lebesgue_norm(const std::function<double(double)>& lp_curve,
                                        const PsiFunction& psi, const ExponentSearchConfig& cfg = {});

/// (double integral of |f(x)-f(y)|^p / |x-y|^{alpha p + 1})^{1/p} for the
/// piecewise-linear interpolant of f.
SeminormResult gagliardo_seminorm_1d(const GridFunction& f, double alpha, double p,
                                     const SeminormConfig& cfg = {});
/// The same seminorm for a function given pointwise on [0, extent], with
/// inner quadrature graded toward x = 0.
SeminormResult gagliardo_seminorm_1d(const std::function<double(double)>& f, double alpha, double p,
                                     const SeminormConfig& cfg = {}, double extent = 1.0);
/// Half-line exterior contribution used by the scaling method: the p-th
/// power of the seminorm over [0,inf) minus that over [0,L], for a grid
/// function extended by zero beyond its box [0,L].
double gagliardo_exterior_power_1d(const GridFunction& f, double alpha, double p);

/// Box-difference seminorm with product kernel prod |x_k - y_k|^{alpha_k p + 1}
/// on the multilinear interpolant. d = 1 uses the 1-D routine.
SeminormResult gagliardo_seminorm_nd(const GridFunction& f, const FractionalIndex& alpha, double p,
                                     const SeminormConfig& cfg = {});

/// p_nodes log-spaced exponents on (max(A, p_0) + offset, min(B, cap)).
std::vector<double> default_p_grid(const FractionalIndex& alpha, const SeminormConfig& cfg = {},
                                   double A = 1.0, double B = kInfinity);

struct NaturalZeta {
  std::vector<double> p;
  std::vector<double> value;
  std::vector<SeminormStatus> status;
  /// Every finite value is zero (constant or additive f): no psi exists.
  bool degenerate = false;
  /// Tabulated zeta on the finite sub-grid; B = inf when the largest grid
  /// node is finite.
  std::optional<PsiFunction> psi;
};

NaturalZeta zeta_natural(const GridFunction& f, const FractionalIndex& alpha,
                         const std::vector<double>& p_grid, const SeminormConfig& cfg = {});

/// 8^d 4^{d/p} prod_k (alpha_k + 1/p) / (alpha_k - 1/p), p > p_0.
double psi_alpha_coefficient(const FractionalIndex& alpha, double p);

/// psi_alpha(p) = zeta(p) * coefficient(p) on (max(A, p_0), B).
PsiFunction psi_alpha(const PsiFunction& zeta, const FractionalIndex& alpha);

struct CoefficientBound {
  double exact;
  double factored;
};
/// prod_k (alpha_k + 1/p)/(alpha_k - 1/p) and its factored upper bound
/// prod_{alpha_k > alpha_0} (alpha_k + alpha_0)/(alpha_k - alpha_0)
///   * ((alpha_0 + 1/p)/(alpha_0 - 1/p))^M.
CoefficientBound multidim_coefficient_bound(const FractionalIndex& alpha, double p);

}  // namespace fsgl
