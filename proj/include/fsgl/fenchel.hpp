#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fsgl {

/// Samples (y_i, g_i) of a convex function on sorted abscissae.
///
/// A side flagged `closed` marks a true end of the function's domain (g is
/// +inf beyond it). An open side marks a truncation of a function whose
/// domain continues; queries beyond the attainable slope on that side give
/// +inf for the conjugate.
struct ConvexSamples {
  std::vector<double> y;
  std::vector<double> g;
  bool closed_left = false;
  bool closed_right = false;

  static ConvexSamples tabulate(const std::function<double(double)>& fn, double lo, double hi,
                                int n);
};

/// Throws ConvexityError naming the first node where the slope decreases by
/// more than `tolerance` (relative to the slope scale).
void check_convex(const ConvexSamples& s, double tolerance = 1e-9);
bool is_convex(const ConvexSamples& s, double tolerance = 1e-9);

/// Lower convex hull of the samples (the convex envelope on the node hull).
ConvexSamples convex_envelope(const ConvexSamples& s);

/// g*(x) = sup_y (x y - g(y)) by direct maximisation over the nodes.
double legendre_brute(const ConvexSamples& s, double x);

/// The same conjugate for sorted queries by a single merge over the slope
/// sequence, O(n + m). Requires convex samples.
std::vector<double> legendre_transform(const ConvexSamples& s, std::span<const double> sorted_x);
double young_fenchel(const ConvexSamples& s, double x);

/// Conjugate tabulated at its own breakpoints (the slopes of the samples).
/// The result is again convex and its conjugate reproduces the input nodes.
ConvexSamples conjugate_samples(const ConvexSamples& s);

}  // namespace fsgl
