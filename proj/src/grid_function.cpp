#include "fsgl/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

#include "fsgl/error.hpp"
#include "fsgl/rng.hpp"

namespace fsgl {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void unflatten(std::size_t flat, int d, int n, std::vector<int>& idx) {
  idx.resize(d);
  for (int k = d - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(flat % n);
    flat /= n;
  }
}

}  // namespace

GridFunction::GridFunction(int d, int n, std::vector<double> values, double extent)
    : d_(d), n_(n), extent_(extent), values_(std::move(values)) {
  if (d < 1) throw DomainError("grid dimension must be >= 1");
  if (n < 2) throw DomainError("grid needs at least two points per axis");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw DomainError("grid extent must be positive");
  if (values_.size() != ipow(static_cast<std::size_t>(n), d))
    throw DomainError("grid value count does not match n^d");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw DomainError("grid value at flat index " + std::to_string(i) + " is not finite");
}

std::size_t GridFunction::flat_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != d_) throw DomainError("index has the wrong dimension");
  std::size_t flat = 0;
  for (int k = 0; k < d_; ++k) {
    if (index[k] < 0 || index[k] >= n_) throw DomainError("lattice index out of range");
    flat = flat * n_ + index[k];
  }
  return flat;
}

double GridFunction::at(std::span<const int> index) const { return values_[flat_index(index)]; }

GridFunction GridFunction::scaled(double c) const {
  auto v = values_;
  for (auto& x : v) x *= c;
  return GridFunction(d_, n_, std::move(v), extent_);
}

GridFunction GridFunction::plus(const GridFunction& other) const {
  if (other.d_ != d_ || other.n_ != n_ || other.extent_ != extent_)
    throw DomainError("grid functions live on different lattices");
  auto v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return GridFunction(d_, n_, std::move(v), extent_);
}

FractionalIndex::FractionalIndex(std::vector<double> a) : alpha(std::move(a)) {
  if (alpha.empty()) throw DomainError("fractional index needs at least one component");
  for (double x : alpha)
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("each alpha_k must lie in (0,1]");
}

double FractionalIndex::alpha0() const { return *std::min_element(alpha.begin(), alpha.end()); }

int FractionalIndex::multiplicity() const {
  const double a0 = alpha0();
  return static_cast<int>(std::count(alpha.begin(), alpha.end(), a0));
}

GridFunction sample_function(const PointFunction& fn, int d, int n, double extent,
                             const GridLimits& limits) {
  if (n < 2) throw DomainError("sample_function needs n >= 2");
  if (d < 1) throw DomainError("sample_function needs d >= 1");
  if (d * std::log(static_cast<double>(n)) > std::log(static_cast<double>(limits.max_points)))
    throw CapExceeded("lattice of " + std::to_string(n) + "^" + std::to_string(d) +
                      " points exceeds the memory budget");
  const std::size_t total = ipow(static_cast<std::size_t>(n), d);
  std::vector<double> values(total);
  std::vector<int> idx;
  std::vector<double> x(d);
  const double h = extent / (n - 1);
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(i, d, n, idx);
    for (int k = 0; k < d; ++k) x[k] = idx[k] == n - 1 ? extent : idx[k] * h;
    values[i] = fn(x);
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "function value is not finite at node (";
      for (int k = 0; k < d; ++k) os << (k ? ", " : "") << x[k];
      os << ")";
      throw DomainError(os.str());
    }
  }
  return GridFunction(d, n, std::move(values), extent);
}

double rectangle_difference(const GridFunction& f, std::span<const int> x, std::span<const int> y) {
  const int d = f.dim();
  if (static_cast<int>(x.size()) != d || static_cast<int>(y.size()) != d)
    throw DomainError("index has the wrong dimension");
  std::vector<int> corner(d);
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    int from_x = 0;
    for (int k = 0; k < d; ++k) {
      const bool take_x = (mask >> k) & 1u;
      corner[k] = take_x ? x[k] : y[k];
      from_x += take_x;
    }
    sum += (from_x % 2 ? -1.0 : 1.0) * f.at(corner);
  }
  return sum;
}

int lattice_gap(double delta, double h, int n) {
  if (!(delta >= 0.0)) throw DomainError("delta must be non-negative");
  const double k = std::floor(delta / h + 1e-9);
  return static_cast<int>(std::min<double>(k, n - 1));
}

double modulus_of_continuity(const GridFunction& f, double delta, const GridLimits& limits) {
  if (!(delta >= 0.0)) throw DomainError("delta must be non-negative");
  const int n = f.size();
  if (f.dim() == 1) {
    const int K = lattice_gap(delta, f.spacing(), n);
    if (K == 0) return 0.0;
    const auto& v = f.values();
    std::deque<int> mx, mn;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      while (!mx.empty() && v[mx.back()] <= v[i]) mx.pop_back();
      while (!mn.empty() && v[mn.back()] >= v[i]) mn.pop_back();
      mx.push_back(i);
      mn.push_back(i);
      while (mx.front() < i - K) mx.pop_front();
      while (mn.front() < i - K) mn.pop_front();
      best = std::max(best, v[mx.front()] - v[mn.front()]);
    }
    return best;
  }
  const std::size_t total = f.point_count();
  if (total > limits.max_pair_points)
    throw CapExceeded("pair sweep over " + std::to_string(total) +
                      " lattice points exceeds the cap; subsample the function first");
  const int d = f.dim();
  const double h = f.spacing();
  const double r2 = (delta / h) * (delta / h) * (1.0 + 1e-12) + 1e-9;
  std::vector<int> a, b;
  double best = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(i, d, n, a);
    for (std::size_t j = i + 1; j < total; ++j) {
      unflatten(j, d, n, b);
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += double(a[k] - b[k]) * (a[k] - b[k]);
      if (s <= r2) best = std::max(best, std::abs(f[i] - f[j]));
    }
  }
  return best;
}

RectangleModulusTable::RectangleModulusTable(const GridFunction& f, const GridLimits& limits)
    : d_(f.dim()), n_(f.size()), h_(f.spacing()) {
  if (d_ == 1) {
    if (n_ > limits.max_pair_n_1d)
      throw CapExceeded("gap table for n = " + std::to_string(n_) +
                        " exceeds the cap; use modulus_of_continuity instead");
  } else if (n_ > limits.max_rect_n) {
    throw CapExceeded("rectangle modulus for n = " + std::to_string(n_) +
                      " points per axis exceeds the cap of " + std::to_string(limits.max_rect_n) +
                      "; subsample the function first");
  }
  const std::size_t total = f.point_count();
  running_max_.assign(total, 0.0);
  std::vector<int> gaps, idx;
  std::vector<double> cur, next;
  for (std::size_t g = 0; g < total; ++g) {
    unflatten(g, d_, n_, gaps);
    // Box differences at gap vector `gaps`, by differencing one axis at a
    // time; `shape` tracks the shrinking array.
    std::vector<int> shape(d_, n_);
    cur = f.values();
    for (int k = 0; k < d_; ++k) {
      if (gaps[k] == 0) {
        cur.clear();
        break;
      }
      std::vector<int> nshape = shape;
      nshape[k] = shape[k] - gaps[k];
      std::size_t inner = 1;
      for (int j = k + 1; j < d_; ++j) inner *= shape[j];
      std::size_t outer = 1;
      for (int j = 0; j < k; ++j) outer *= shape[j];
      next.assign(outer * nshape[k] * inner, 0.0);
      for (std::size_t o = 0; o < outer; ++o)
        for (int m = 0; m < nshape[k]; ++m)
          for (std::size_t in = 0; in < inner; ++in)
            next[(o * nshape[k] + m) * inner + in] =
                cur[(o * shape[k] + m + gaps[k]) * inner + in] - cur[(o * shape[k] + m) * inner + in];
      cur.swap(next);
      shape = nshape;
    }
    double best = 0.0;
    for (double v : cur) best = std::max(best, std::abs(v));
    running_max_[g] = best;
  }
  // Running maxima along each axis turn per-gap maxima into maxima over
  // all gap vectors bounded componentwise.
  for (int k = 0; k < d_; ++k) {
    std::size_t stride = 1;
    for (int j = k + 1; j < d_; ++j) stride *= n_;
    for (std::size_t g = 0; g < total; ++g) {
      unflatten(g, d_, n_, idx);
      if (idx[k] > 0) running_max_[g] = std::max(running_max_[g], running_max_[g - stride]);
    }
  }
}

double RectangleModulusTable::at_gaps(std::span<const int> gaps) const {
  if (static_cast<int>(gaps.size()) != d_) throw DomainError("gap vector has the wrong dimension");
  std::size_t flat = 0;
  for (int k = 0; k < d_; ++k) flat = flat * n_ + std::clamp(gaps[k], 0, n_ - 1);
  return running_max_[flat];
}

double RectangleModulusTable::operator()(std::span<const double> delta) const {
  if (static_cast<int>(delta.size()) != d_) throw DomainError("delta vector has the wrong dimension");
  std::vector<int> gaps(d_);
  for (int k = 0; k < d_; ++k) {
    if (!(delta[k] >= 0.0)) throw DomainError("delta components must be non-negative");
    gaps[k] = lattice_gap(delta[k], h_, n_);
  }
  return at_gaps(gaps);
}

double rectangle_modulus(const GridFunction& f, std::span<const double> delta, const GridLimits& limits) {
  if (static_cast<int>(delta.size()) != f.dim()) throw DomainError("delta vector has the wrong dimension");
  if (f.dim() == 1) return modulus_of_continuity(f, delta[0], limits);
  return RectangleModulusTable(f, limits)(delta);
}

double tapered_extension(const std::function<double(double)>& f, double x) {
  if (x < 0.0) throw DomainError("tapered extension is defined for x >= 0");
  if (x <= 1.0) return f(x);
  if (x < 2.0) return f(1.0) * (2.0 - x);
  return 0.0;
}

GridFunction dilate(const std::function<double(double)>& f, double lambda, int n, double box) {
  if (!(lambda > 0.0)) throw DomainError("dilation needs lambda > 0");
  if (!(lambda <= 1.0)) throw DomainError("dilation needs lambda <= 1");
  if (2.0 / lambda > box * (1.0 + 1e-12))
    throw DomainError("support [0, 2/lambda] escapes the computational box");
  return sample_function([&](std::span<const double> x) { return tapered_extension(f, lambda * x[0]); },
                         1, n, box);
}

std::int64_t DistanceReport::violation_count(char property) const {
  if (property == 'a') return violated_a;
  if (property == 'b') return violated_b;
  return violated_c;
}

namespace {

struct DistanceChecker {
  const GridFunction& f;
  DistanceReport& report;
  std::size_t keep;
  double tol;

  double rho(const std::vector<int>& x, const std::vector<int>& y) const {
    return std::abs(rectangle_difference(f, x, y));
  }

  void record(char prop, const std::vector<int>& x, const std::vector<int>& y,
              const std::vector<int>& z, double lhs, double rhs) {
    if (prop == 'a') ++report.violated_a;
    if (prop == 'b') ++report.violated_b;
    if (prop == 'c') ++report.violated_c;
    if (report.violations.size() < keep) report.violations.push_back({prop, x, y, z, lhs, rhs});
  }

  void triple(const std::vector<int>& x, const std::vector<int>& y, const std::vector<int>& z) {
    ++report.trials;
    const double rxy = rho(x, y), ryx = rho(y, x), ryz = rho(y, z), rxz = rho(x, z);
    bool degenerate = false;
    for (std::size_t k = 0; k < x.size(); ++k) degenerate |= x[k] == y[k];
    if (rxy < 0.0 || (degenerate && rxy > tol)) record('a', x, y, {}, rxy, 0.0);
    if (std::abs(rxy - ryx) > tol) record('b', x, y, {}, rxy, ryx);
    if (rxz > rxy + ryz + tol) record('c', x, y, z, rxz, rxy + ryz);
  }
};

double value_scale(const GridFunction& f) {
  double s = 0.0;
  for (double v : f.values()) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

DistanceReport rectangle_distance_check(const GridFunction& f, std::int64_t trials, std::uint64_t seed,
                                        std::size_t keep) {
  DistanceReport report;
  DistanceChecker chk{f, report, keep, 1e-12 * (1.0 + value_scale(f)) * (1 << f.dim())};
  auto rng = stream_rng(seed, 0);
  std::uniform_int_distribution<int> pick(0, f.size() - 1);
  std::uniform_int_distribution<int> axis(0, f.dim() - 1);
  const int d = f.dim();
  std::vector<int> x(d), y(d), z(d);
  for (std::int64_t t = 0; t < trials; ++t) {
    for (int k = 0; k < d; ++k) {
      x[k] = pick(rng);
      y[k] = pick(rng);
      z[k] = pick(rng);
    }
    chk.triple(x, y, z);
    // A degenerate box sharing one coordinate exercises property (a).
    auto w = y;
    const int j = axis(rng);
    w[j] = x[j];
    chk.triple(x, w, z);
    chk.triple(x, x, z);
  }
  return report;
}

DistanceReport rectangle_distance_exhaustive(const GridFunction& f, std::size_t keep,
                                             const GridLimits& limits) {
  const std::size_t total = f.point_count();
  if (total > 4 * static_cast<std::size_t>(limits.max_rect_n))
    throw CapExceeded("exhaustive triple sweep needs a small lattice");
  DistanceReport report;
  DistanceChecker chk{f, report, keep, 1e-12 * (1.0 + value_scale(f)) * (1 << f.dim())};
  std::vector<int> x, y, z;
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(i, f.dim(), f.size(), x);
    for (std::size_t j = 0; j < total; ++j) {
      unflatten(j, f.dim(), f.size(), y);
      for (std::size_t l = 0; l < total; ++l) {
        unflatten(l, f.dim(), f.size(), z);
        chk.triple(x, y, z);
      }
    }
  }
  return report;
}

std::string write_grid_csv(const GridFunction& f) {
  std::ostringstream os;
  os << "# fsgl grid v1\n";
  os << "d,n,extent\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", f.extent());
  os << f.dim() << ',' << f.size() << ',' << buf << '\n';
  for (double v : f.values()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << '\n';
  }
  return os.str();
}

GridFunction read_grid_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line() || line.rfind("d,n", 0) != 0) throw ConfigError("grid CSV: missing 'd,n' header");
  if (!next_line()) throw ConfigError("grid CSV: missing dimension row");
  int d = 0, n = 0;
  double extent = 1.0;
  {
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 2) throw ConfigError("grid CSV: dimension row needs d and n");
    try {
      d = std::stoi(cells[0]);
      n = std::stoi(cells[1]);
      if (cells.size() > 2) extent = std::stod(cells[2]);
    } catch (const std::exception&) {
      throw ConfigError("grid CSV: malformed dimension row '" + line + "'");
    }
  }
  std::vector<double> values;
  while (next_line()) {
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw ConfigError("grid CSV: malformed value '" + line + "'");
    }
  }
  try {
    return GridFunction(d, n, std::move(values), extent);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("grid CSV: ") + e.what());
  }
}

}  // namespace fsgl
