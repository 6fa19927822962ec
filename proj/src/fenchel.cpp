#include "fsgl/fenchel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fsgl/error.hpp"

namespace fsgl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(const ConvexSamples& s) {
  if (s.y.size() < 2 || s.y.size() != s.g.size())
    throw DomainError("convex samples need at least two matching nodes");
  for (std::size_t i = 1; i < s.y.size(); ++i)
    if (!(s.y[i] > s.y[i - 1])) throw DomainError("convex sample abscissae must increase");
}

double slope(const ConvexSamples& s, std::size_t i) {
  return (s.g[i + 1] - s.g[i]) / (s.y[i + 1] - s.y[i]);
}

// Value on the part of the line outside the slope range, where the sup runs
// off to an open side (+inf) or stops at a closed end node.
bool outside_slope_range(const ConvexSamples& s, double x, double& out) {
  const std::size_t n = s.y.size();
  if (x < slope(s, 0)) {
    out = s.closed_left ? x * s.y.front() - s.g.front() : kInf;
    return true;
  }
  if (x > slope(s, n - 2)) {
    out = s.closed_right ? x * s.y.back() - s.g.back() : kInf;
    return true;
  }
  return false;
}

}  // namespace

ConvexSamples ConvexSamples::tabulate(const std::function<double(double)>& fn, double lo,
                                      double hi, int n) {
  if (n < 2 || !(lo < hi)) throw DomainError("tabulation needs n >= 2 and lo < hi");
  ConvexSamples s;
  s.y.resize(n);
  s.g.resize(n);
  for (int i = 0; i < n; ++i) {
    s.y[i] = lo + (hi - lo) * i / (n - 1);
    s.g[i] = fn(s.y[i]);
  }
  return s;
}

bool is_convex(const ConvexSamples& s, double tolerance) {
  require_shape(s);
  for (std::size_t i = 1; i + 1 < s.y.size(); ++i) {
    const double l = slope(s, i - 1), r = slope(s, i);
    const double scale = std::max({1.0, std::abs(l), std::abs(r)});
    if (r < l - tolerance * scale) return false;
  }
  return true;
}

void check_convex(const ConvexSamples& s, double tolerance) {
  require_shape(s);
  for (std::size_t i = 1; i + 1 < s.y.size(); ++i) {
    const double l = slope(s, i - 1), r = slope(s, i);
    const double scale = std::max({1.0, std::abs(l), std::abs(r)});
    if (r < l - tolerance * scale) {
      std::ostringstream os;
      os << "samples are not convex at node " << i << " (y=" << s.y[i] << "): slope drops from "
         << l << " to " << r;
      throw ConvexityError(os.str());
    }
  }
}

ConvexSamples convex_envelope(const ConvexSamples& s) {
  require_shape(s);
  ConvexSamples out;
  out.closed_left = s.closed_left;
  out.closed_right = s.closed_right;
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    while (out.y.size() >= 2) {
      const std::size_t k = out.y.size();
      const double cross = (out.y[k - 1] - out.y[k - 2]) * (s.g[i] - out.g[k - 2]) -
                           (out.g[k - 1] - out.g[k - 2]) * (s.y[i] - out.y[k - 2]);
      if (cross <= 0.0) {
        out.y.pop_back();
        out.g.pop_back();
      } else {
        break;
      }
    }
    out.y.push_back(s.y[i]);
    out.g.push_back(s.g[i]);
  }
  return out;
}

double legendre_brute(const ConvexSamples& s, double x) {
  require_shape(s);
  double v;
  if (outside_slope_range(s, x, v)) return v;
  double best = -kInf;
  for (std::size_t i = 0; i < s.y.size(); ++i) best = std::max(best, x * s.y[i] - s.g[i]);
  return best;
}

std::vector<double> legendre_transform(const ConvexSamples& s, std::span<const double> xs) {
  require_shape(s);
  std::vector<double> out(xs.size());
  const std::size_t n = s.y.size();
  std::size_t i = 0;  // current vertex: slope(i-1) <= x <= slope(i)
  for (std::size_t q = 0; q < xs.size(); ++q) {
    if (q > 0 && xs[q] < xs[q - 1]) throw DomainError("legendre_transform needs sorted queries");
    const double x = xs[q];
    double v;
    if (outside_slope_range(s, x, v)) {
      out[q] = v;
      continue;
    }
    while (i + 1 < n && slope(s, i) < x) ++i;
    out[q] = x * s.y[i] - s.g[i];
  }
  return out;
}

double young_fenchel(const ConvexSamples& s, double x) {
  const double q[1] = {x};
  return legendre_transform(s, q)[0];
}

ConvexSamples conjugate_samples(const ConvexSamples& s) {
  check_convex(s);
  ConvexSamples c;
  // Closed domain ends of g become unbounded linear pieces of g*, so the
  // conjugate table is a truncation on those sides and vice versa.
  c.closed_left = !s.closed_left;
  c.closed_right = !s.closed_right;
  for (std::size_t i = 0; i + 1 < s.y.size(); ++i) {
    const double x = slope(s, i);
    if (!c.y.empty() && !(x > c.y.back())) {
      // Collinear nodes give repeated slopes; keep the larger conjugate value.
      c.g.back() = std::max(c.g.back(), x * s.y[i] - s.g[i]);
      continue;
    }
    c.y.push_back(x);
    c.g.push_back(x * s.y[i] - s.g[i]);
  }
  if (c.y.size() < 2) throw DomainError("conjugate of affine samples is a single point");
  return c;
}

}  // namespace fsgl
