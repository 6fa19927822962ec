#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsgl/grid_function.hpp"
#include "fsgl/psi.hpp"

namespace fsgl {

enum class FieldKind { brownian_motion, fractional_brownian_motion, brownian_sheet };
std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

struct RandomFieldModel {
  FieldKind kind = FieldKind::brownian_motion;
  double hurst = 0.5;
  std::uint64_t seed = 1;
  /// Lattice points per axis (intervals = n - 1).
  int n = (1 << 14) + 1;
  /// Skip circulant embedding for fractional Brownian motion.
  bool force_cholesky = false;

  int dim() const { return kind == FieldKind::brownian_sheet ? 2 : 1; }
  void validate() const;
};

/// Draws paths of a model; path `index` depends only on (model, index).
/// Fractional Brownian motion uses circulant embedding of the increment
/// covariance and falls back to a Cholesky factor at reduced n if the
/// embedding has negative eigenvalues.
class PathSampler {
 public:
  explicit PathSampler(const RandomFieldModel& model);
  GridFunction operator()(std::uint64_t index) const;
  const RandomFieldModel& model() const { return model_; }
  /// Effective lattice size (smaller than requested after a fallback).
  int lattice_size() const { return n_; }
  const std::string& warning() const { return warning_; }

 private:
  RandomFieldModel model_;
  int n_;
  std::string warning_;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

GridFunction sample_path(const RandomFieldModel& model, std::uint64_t index = 0);

struct McConfig {
  int paths = 10000;
  int batches = 20;
  int workers = 1;
  /// Start positions per gap for stationary-increment moment averages.
  int positions = 64;
  /// Relative standard error above which a moment is treated as a
  /// heavy-tail signal.
  double heavy_tail_rse = 0.5;
  void validate() const;
};

struct MomentEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  int paths = 0;
  double p = 0.0;
};

struct IndexPair {
  std::vector<int> x, y;
};

/// E |box difference of xi(x,y)|^p averaged over `pairs`, with batched
/// standard errors.
MomentEstimate mc_rectangle_moment(const RandomFieldModel& model, double p, const std::vector<IndexPair>& pairs,
                                   const McConfig& mc);

/// Geometric gap ladder (ratio sqrt 2, distinct lattice steps) from one step
/// up to max_steps.
std::vector<int> gap_ladder(int max_steps);

/// For every gap vector and exponent, E |box difference|^p at that gap,
/// averaged over `positions` stratified start points per path.
struct GapMoments {
  std::vector<std::vector<int>> gaps;
  std::vector<double> p;
  /// est[g][j] for gaps[g], p[j].
  std::vector<std::vector<MomentEstimate>> est;
  double h = 0.0;
};
GapMoments mc_gap_moments(const RandomFieldModel& model, const std::vector<double>& p,
                          const std::vector<std::vector<int>>& gaps, const McConfig& mc,
                          std::uint64_t stream = 0);

struct ThetaResult {
  std::vector<double> p;
  std::vector<double> value;  // +inf where divergent or truncated
  std::vector<bool> divergent;
  std::vector<bool> heavy_tail;
  /// Support was cut below the largest grid node.
  bool truncated = false;
  std::optional<PsiFunction> psi;
  GapMoments moments;
};

/// theta_alpha(p) = coefficient(p) (integral of E|G_alpha[xi]|^p d nu)^{1/p},
/// the integral assembled from MC gap moments with log-linear interpolation
/// between ladder gaps and a fitted power-law tail below one lattice step.
ThetaResult theta_natural(const RandomFieldModel& model, const FractionalIndex& alpha,
                          const std::vector<double>& p_grid, const McConfig& mc);

/// Omega of every path at every delta cell, [path][cell].
struct ModulusSamples {
  std::vector<std::vector<double>> delta;
  std::vector<std::vector<double>> omega;
};
ModulusSamples sample_moduli(const RandomFieldModel& model, const std::vector<std::vector<double>>& delta_grid,
                             const McConfig& mc, std::uint64_t stream = 1);

struct Thm41Row {
  std::vector<double> delta;
  MomentEstimate moment;  // |Omega|_A with standard error
  double bound;
  double slack;
  bool holds;  // moment <= bound, with a 3 SE allowance
};

struct Thm41Report {
  double A = 0.0;
  ThetaResult theta;
  std::vector<Thm41Row> rows;
  /// Log-log slope of the bound against prod delta_k, and its expectation
  /// sum alpha_k / d - 1/A for equal deltas.
  double bound_slope = 0.0;
  std::size_t holding_cells() const;
};

Thm41Report thm41_experiment(const RandomFieldModel& model, const FractionalIndex& alpha,
                             const std::vector<std::vector<double>>& delta_grid,
                             const std::vector<double>& p_grid, const McConfig& mc);

struct Thm42Params {
  double alpha_exp;
  std::vector<double> beta;
  double K;
  /// Precondition tolerance on E|box|^alpha / (K prod gap^{1+beta}).
  double moment_tolerance = 0.05;
};

struct Thm42Report {
  Thm42Params params;
  std::vector<double> normalizer_exponent;  // beta_k / alpha
  /// Precondition: fitted ratio per gap and its standard error.
  std::vector<double> precondition_gap;
  std::vector<double> precondition_ratio;
  std::vector<double> precondition_se;
  std::vector<std::vector<double>> delta;
  std::vector<double> mean_R;
  std::vector<double> min_R;
  std::vector<double> max_R;
  /// max/min of mean R across the delta grid.
  double spread = 0.0;
  /// (E sup_delta R^alpha)^{1/alpha} / K^{1/alpha}: the smallest C with E tau^alpha <= 1.
  double fitted_C = 0.0;
  /// min over paths of omega / (delta^{1/2} |log delta|^{1/2}) at the smallest delta (d = 1).
  double exactness_floor = 0.0;
};

/// Verifies the moment condition first (throws DomainError with the fitted
/// ratios when it fails), then reports R(delta) = Omega / prod(delta^{beta/alpha} |log delta|^{1/alpha}).
Thm42Report thm42_experiment(const RandomFieldModel& model, const Thm42Params& params,
                             const std::vector<std::vector<double>>& delta_grid, const McConfig& mc,
                             const ModulusSamples* precomputed = nullptr);

/// The Brownian choice alpha = 2 + 2 Delta, beta = Delta, K = E|Z|^{2+2Delta}.
Thm42Params brownian_thm42_params(double Delta);

struct TailRow {
  double z;
  double empirical;
  double binomial_se;
  double bound;
  /// False for z below the norm threshold, where the bound does not apply.
  bool applied;
  bool valid;  // empirical <= bound + 3 SE
};

struct TailReport {
  double q = 0.0;
  std::vector<double> delta;
  ThetaResult theta;
  std::vector<TailRow> rows;
};

/// Exceedance of Omega / delta^alpha over thresholds z >= 1 against the
/// tail bound built from psi(q') = lambda(q', prod delta) = 1/phi_{q'}(G theta, prod delta).
TailReport tail_report(const RandomFieldModel& model, const FractionalIndex& alpha, double q,
                       const std::vector<double>& delta, const std::vector<double>& z_list,
                       const std::vector<double>& p_grid, const McConfig& mc);

/// Runs body(unit) for unit in [0, units) on `workers` threads.
void parallel_for(int units, int workers, const std::function<void(int)>& body);

}  // namespace fsgl
