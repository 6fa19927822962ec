#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fsgl {

/// Real values on the uniform lattice x_j = j * extent / (n - 1) of the box
/// [0, extent]^d, stored row-major (last axis fastest).
class GridFunction {
 public:
  GridFunction(int d, int n, std::vector<double> values, double extent = 1.0);

  int dim() const { return d_; }
  int size() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / (n_ - 1); }
  std::size_t point_count() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double at(std::span<const int> index) const;
  double operator[](std::size_t flat) const { return values_[flat]; }
  std::size_t flat_index(std::span<const int> index) const;

  GridFunction scaled(double c) const;
  GridFunction plus(const GridFunction& other) const;

 private:
  int d_;
  int n_;
  double extent_;
  std::vector<double> values_;
};

/// The smoothness vector alpha with alpha_0 = min alpha_k, p_0 = 1/alpha_0
/// and M = number of k with alpha_k = alpha_0.
struct FractionalIndex {
  std::vector<double> alpha;

  explicit FractionalIndex(std::vector<double> a);
  static FractionalIndex uniform(double a, int d) { return FractionalIndex(std::vector<double>(d, a)); }

  int dim() const { return static_cast<int>(alpha.size()); }
  double alpha0() const;
  double p0() const { return 1.0 / alpha0(); }
  int multiplicity() const;
};

/// Size caps for brute-force sweeps.
struct GridLimits {
  std::size_t max_points = std::size_t{1} << 26;
  /// Pair sweeps over all lattice points (Euclidean modulus for d >= 2, the
  /// gap table in d = 1).
  int max_pair_n_1d = 4096;
  std::size_t max_pair_points = 4096;
  /// Rectangle modulus tables for d >= 2, per axis.
  int max_rect_n = 64;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Lattice evaluation of `fn` on [0, extent]^d; throws DomainError naming
/// the first non-finite node.
GridFunction sample_function(const PointFunction& fn, int d, int n, double extent = 1.0,
                             const GridLimits& limits = {});

/// Alternating corner sum of f over the box spanned by lattice indices x, y.
double rectangle_difference(const GridFunction& f, std::span<const int> x, std::span<const int> y);

/// Largest lattice gap k with k h <= delta (with a 1e-9 rounding allowance).
int lattice_gap(double delta, double h, int n);

/// omega(f, delta): max |f(x) - f(y)| over lattice pairs with Euclidean
/// |x - y| <= delta. Exact O(n) sliding window in d = 1, a capped pair sweep
/// otherwise.
double modulus_of_continuity(const GridFunction& f, double delta, const GridLimits& limits = {});

/// Sup of |box difference| over lattice pairs with |x_k - y_k| <= delta_k.
double rectangle_modulus(const GridFunction& f, std::span<const double> delta,
                         const GridLimits& limits = {});

/// Precomputed maxima of |box difference| per gap vector, with running
/// maxima so that repeated rectangle-modulus queries are O(1).
class RectangleModulusTable {
 public:
  explicit RectangleModulusTable(const GridFunction& f, const GridLimits& limits = {});
  double operator()(std::span<const double> delta) const;
  double at_gaps(std::span<const int> gaps) const;

 private:
  int d_;
  int n_;
  double h_;
  std::vector<double> running_max_;
};

/// Box [0, 2 / lambda] lattice samples of x -> f_ext(lambda x), where f_ext is
/// f on [0,1], the linear taper from f(1) to 0 on [1,2], and 0 beyond.
/// `box` is the half-line truncation; the support [0, 2/lambda] must fit.
GridFunction dilate(const std::function<double(double)>& f, double lambda, int n, double box);
double tapered_extension(const std::function<double(double)>& f, double x);

struct DistanceViolation {
  char property;  // 'a', 'b' or 'c'
  std::vector<int> x, y, z;
  double lhs, rhs;
};

struct DistanceReport {
  std::int64_t trials = 0;
  std::int64_t violated_a = 0, violated_b = 0, violated_c = 0;
  std::vector<DistanceViolation> violations;
  std::int64_t violation_count(char property) const;
};

/// Checks rho_f(x,y) = |box difference| for (a) non-negativity and vanishing
/// on degenerate boxes, (b) symmetry and (c) the triangle inequality on
/// random index triples. Violations are reported, not thrown; at most
/// `keep` of them are stored.
DistanceReport rectangle_distance_check(const GridFunction& f, std::int64_t trials,
                                        std::uint64_t seed, std::size_t keep = 32);

/// The same checks over every lattice triple; for small lattices only.
DistanceReport rectangle_distance_exhaustive(const GridFunction& f, std::size_t keep = 32,
                                             const GridLimits& limits = {});

std::string write_grid_csv(const GridFunction& f);
GridFunction read_grid_csv(const std::string& text);

}  // namespace fsgl
