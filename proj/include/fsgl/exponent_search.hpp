#pragma once

#include <functional>
#include <limits>

namespace fsgl {

/// An interval of exponents p scanned by the sup-over-p solver.
///
/// Bounded intervals are scanned uniformly in p. When `hi` is infinite the
/// scan runs over t in (0,1) with p = lo + t / (1 - t). A closed interval
/// includes its end points in the scan; an open one never evaluates them.
struct ExponentInterval {
  double lo = 1.0;
  double hi = std::numeric_limits<double>::infinity();
  bool closed = false;
};

struct ExponentSearchConfig {
  int nodes = 512;
  double t_tolerance = 1e-13;
  int max_refine_iterations = 200;
};

struct ExponentArgmax {
  double log_value = -std::numeric_limits<double>::infinity();
  double p = std::numeric_limits<double>::quiet_NaN();
  /// The maximiser sits at the last scanned node next to the upper end of
  /// the interval, so the true supremum may be approached only as p -> hi.
  bool at_upper_end = false;
};

/// Maximises `log_objective(p)` over the interval: a dense scan followed by
/// golden-section refinement around the best node. No unimodality is
/// assumed; ties are broken toward smaller p. The objective may return -inf
/// where it is undefined.
ExponentArgmax maximize_over_exponents(const ExponentInterval& interval,
                                       const std::function<double(double)>& log_objective,
                                       const ExponentSearchConfig& cfg = {});

}  // namespace fsgl
