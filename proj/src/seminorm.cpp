#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fsgl/error.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/quadrature.hpp"

namespace fsgl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double pow_abs(double x, double p) {
  x = std::abs(x);
  if (p == 4.0) {
    const double s = x * x;
    return s * s;
  }
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

void check_alpha_p(double alpha, double p) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be a finite exponent >= 1");
  if (!(p * alpha > 1.0)) throw DomainError("the seminorm needs p > 1/alpha");
}

/// Shell nodes in s = log u on [lo, hi] with `panels` 2-point Gauss panels;
/// returns (u, log of ds-weight times u) pairs.
void shell_nodes(double lo, double hi, int panels, std::vector<std::pair<double, double>>& out) {
  const auto& g = gauss_legendre(2);
  const double slo = std::log(lo), shi = std::log(hi);
  const double width = (shi - slo) / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = slo + k * width;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double s = a + 0.5 * width * (g.x[i] + 1.0);
      out.emplace_back(std::exp(s), std::log(0.5 * width * g.w[i]) + s);
    }
  }
}

struct Interpolant1d {
  const std::vector<double>& F;
  std::vector<double> slope;
  double h;
  double L;
  int n;

  explicit Interpolant1d(const GridFunction& f) : F(f.values()), h(f.spacing()), L(f.extent()), n(f.size()) {
    slope.resize(n - 1);
    for (int j = 0; j + 1 < n; ++j) slope[j] = (F[j + 1] - F[j]) / h;
  }

  /// log J(u), J(u) = integral over x in [0, L-u] of |f(x+u) - f(x)|^p.
  double log_J(double u, double p) const {
    int k = static_cast<int>(std::floor(u / h));
    double r = u - k * h;
    if (r >= h) {
      r -= h;
      ++k;
    }
    if (r < 0.0) r = 0.0;
    if (k >= n - 1) return kNegInf;
    auto for_pieces = [&](auto&& visit) {
      for (int j = 0; j + k <= n - 2; ++j)
        visit((F[j + k] - F[j]) + slope[j + k] * r, slope[j + k] - slope[j], h - r);
      if (r > 0.0)
        for (int j = 0; j + k + 1 <= n - 2; ++j)
          visit((F[j + k + 1] - F[j + 1]) + slope[j] * r, slope[j + k + 1] - slope[j], r);
    };
    double M = 0.0;
    for_pieces([&](double a, double b, double w) {
      M = std::max({M, std::abs(a), std::abs(a + b * w)});
    });
    if (M == 0.0) return kNegInf;
    double S = 0.0;
    for_pieces([&](double a, double b, double w) {
      S += abs_linear_power_integral(a / M, b / M, w, p);
    });
    if (!(S > 0.0)) return kNegInf;
    return p * std::log(M) + std::log(S);
  }
};

/// Accumulates 2 * integral of u^{-alpha p - 1} J(u) du over geometric
/// shells from `top` down `shells` ratios, then closes with a power-law tail
/// fitted from the two innermost shell edges.
template <class LogJ>
SeminormResult diagonal_integral(LogJ&& log_J, double top, double alpha, double p, int shells,
                                 const SeminormConfig& cfg) {
  const double rho = cfg.grading_ratio;
  std::vector<std::pair<double, double>> nodes;
  double hi = top;
  for (int m = 0; m < shells; ++m) {
    const double lo = hi * rho;
    shell_nodes(lo, hi, cfg.panels_per_shell, nodes);
    hi = lo;
  }
  const double ap = alpha * p;
  double log_sum = kNegInf;
  for (const auto& [u, lw] : nodes) {
    const double lj = log_J(u);
    if (lj == kNegInf) continue;
    log_sum = log_add(log_sum, lw - (ap + 1.0) * std::log(u) + lj);
  }
  SeminormResult res;
  const double ua = hi, ub = hi / rho;
  const double ja = log_J(ua), jb = log_J(ub);
  if (ja == kNegInf || jb == kNegInf) {
    res.tail_exponent = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double gamma = (jb - ja) / std::log(ub / ua);
    res.tail_exponent = gamma;
    if (gamma - ap <= cfg.divergence_margin) {
      res.status = SeminormStatus::divergent;
      res.value = kInfinity;
      return res;
    }
    const double log_tail = ja - ap * std::log(ua) - std::log(gamma - ap);
    log_sum = log_add(log_sum, log_tail);
    res.tail_fraction = std::exp(log_tail - log_sum);
  }
  if (log_sum == kNegInf) {
    res.value = 0.0;
    return res;
  }
  res.value = std::exp((std::log(2.0) + log_sum) / p);
  return res;
}

}  // namespace

std::string to_string(SeminormStatus s) { return s == SeminormStatus::ok ? "ok" : "divergent"; }

void SeminormConfig::validate() const {
  if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) throw ConfigError("grading ratio must lie in (0,1)");
  if (resolution < 16) throw ConfigError("quadrature resolution must be >= 16");
  if (shells < 4) throw ConfigError("need at least 4 diagonal shells");
  if (panels_per_shell < 1) throw ConfigError("panels_per_shell must be >= 1");
  if (!(callable_u_cut > 0.0 && callable_u_cut < 1.0)) throw ConfigError("callable_u_cut must lie in (0,1)");
  if (nd_shells_below_h < 1) throw ConfigError("nd_shells_below_h must be >= 1");
  if (p_nodes < 2) throw ConfigError("p-grid needs at least two nodes");
  if (!(p_offset > 0.0)) throw ConfigError("p-grid offset must be positive");
  if (!(p_cap > 1.0)) throw ConfigError("p-grid cap must exceed 1");
}

SeminormResult gagliardo_seminorm_1d(const GridFunction& f, double alpha, double p, const SeminormConfig& cfg) {
  cfg.validate();
  check_alpha_p(alpha, p);
  if (f.dim() != 1) throw DomainError("gagliardo_seminorm_1d needs a one-dimensional function");
  const Interpolant1d g(f);
  return diagonal_integral([&](double u) { return g.log_J(u, p); }, f.extent(), alpha, p, cfg.shells, cfg);
}

SeminormResult gagliardo_seminorm_1d(const std::function<double(double)>& f, double alpha, double p,
                                     const SeminormConfig& cfg, double extent) {
  cfg.validate();
  check_alpha_p(alpha, p);
  const auto& rule = gauss_legendre(cfg.resolution);
  std::vector<double> diffs, weights;
  auto log_J = [&](double u) {
    const double top = extent - u;
    if (top <= 0.0) return kNegInf;
    std::vector<double> edges{0.0};
    double e = u * std::ldexp(1.0, -40);
    while (e < top) {
      edges.push_back(e);
      e *= 2.0;
    }
    edges.push_back(top);
    diffs.clear();
    weights.clear();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double a = edges[i], b = edges[i + 1];
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const double x = a + 0.5 * (b - a) * (rule.x[q] + 1.0);
        const double d = f(x + u) - f(x);
        if (!std::isfinite(d)) throw DomainError("function is not finite at x = " + std::to_string(x));
        diffs.push_back(std::abs(d));
        weights.push_back(0.5 * (b - a) * rule.w[q]);
      }
    }
    const double M = *std::max_element(diffs.begin(), diffs.end());
    if (M == 0.0) return kNegInf;
    double S = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) S += weights[i] * pow_abs(diffs[i] / M, p);
    return p * std::log(M) + std::log(S);
  };
  const int shells =
      static_cast<int>(std::ceil(std::log(cfg.callable_u_cut) / std::log(cfg.grading_ratio)));
  return diagonal_integral(log_J, extent, alpha, p, shells, cfg);
}

double gagliardo_exterior_power_1d(const GridFunction& f, double alpha, double p) {
  check_alpha_p(alpha, p);
  if (f.dim() != 1) throw DomainError("exterior term needs a one-dimensional function");
  const auto& F = f.values();
  const int n = f.size();
  const double h = f.spacing();
  const double ap = alpha * p;
  if (F[n - 1] != 0.0) return kInfinity;
  // w = L - x; cell m covers w in [m h, (m+1) h].
  const double s_last = (F[n - 2] - F[n - 1]) / h;
  double sum = pow_abs(s_last, p) * std::pow(h, p - ap + 1.0) / (p - ap + 1.0);
  const auto& rule = gauss_legendre(16);
  for (int m = 1; m < n - 1; ++m) {
    const int j = n - 1 - m;  // cell between nodes j-1 and j, w in [m h, (m+1) h]
    const double a = m * h;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      const double t = 0.5 * (rule.x[q] + 1.0);
      const double w = a + t * h;
      const double val = F[j] + (F[j - 1] - F[j]) * t;
      sum += 0.5 * h * rule.w[q] * pow_abs(val, p) * std::pow(w, -ap);
    }
  }
  return 2.0 * sum / ap;
}

namespace {

struct SparseEntry {
  int index;
  double weight;
};

struct AxisPoint {
  double weight;
  std::array<SparseEntry, 4> v;
};

/// Gauss points over x in [0, L-u] between breakpoints of the hats at x and
/// x+u, each carrying the sparse vector phi(x+u) - phi(x).
std::vector<AxisPoint> axis_points(int n, double h, double L, double u, int gauss_points) {
  std::vector<double> br;
  const double top = L - u;
  for (int j = 0; j < n; ++j) {
    const double a = j * h, b = j * h - u;
    if (a > 0.0 && a < top) br.push_back(a);
    if (b > 0.0 && b < top) br.push_back(b);
  }
  br.push_back(0.0);
  br.push_back(top);
  std::sort(br.begin(), br.end());
  const auto& g = gauss_legendre(gauss_points);
  std::vector<AxisPoint> pts;
  auto hat = [&](double x, double sign, SparseEntry* out) {
    int c = std::min(static_cast<int>(std::floor(x / h)), n - 2);
    c = std::max(c, 0);
    const double t = x / h - c;
    out[0] = {c, sign * (1.0 - t)};
    out[1] = {c + 1, sign * t};
  };
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    if (b - a <= 1e-15 * L) continue;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double x = a + 0.5 * (b - a) * (g.x[q] + 1.0);
      AxisPoint pt;
      pt.weight = 0.5 * (b - a) * g.w[q];
      hat(x, -1.0, pt.v.data());
      hat(x + u, 1.0, pt.v.data() + 2);
      pts.push_back(pt);
    }
  }
  return pts;
}

}  // namespace

SeminormResult gagliardo_seminorm_nd(const GridFunction& f, const FractionalIndex& alpha, double p,
                                     const SeminormConfig& cfg) {
  cfg.validate();
  const int d = f.dim();
  if (alpha.dim() != d) throw DomainError("fractional index dimension does not match the function");
  if (!(p > alpha.p0())) throw DomainError("the seminorm needs p > p_0 = 1/min alpha_k");
  if (d == 1) return gagliardo_seminorm_1d(f, alpha.alpha[0], p, cfg);
  if (d >= 3 && !cfg.allow_d3) throw CapExceeded("d >= 3 seminorms need the explicit override");
  if (f.size() > cfg.limits.max_rect_n)
    throw CapExceeded("multidimensional seminorm needs at most " + std::to_string(cfg.limits.max_rect_n) +
                      " points per axis; subsample the function first");
  const int n = f.size();
  const double h = f.spacing(), L = f.extent(), rho = cfg.grading_ratio;
  SeminormResult res;
  res.tail_exponent = p;
  // Per-axis u nodes: Gauss shells down to h rho^m, then one tail node for
  // J ~ u^p (the interpolant is Lipschitz in each variable).
  std::vector<std::vector<std::pair<double, double>>> unodes(d);
  for (int k = 0; k < d; ++k) {
    const double ak = alpha.alpha[k];
    if (p - ak * p <= cfg.divergence_margin) {
      res.status = SeminormStatus::divergent;
      res.value = kInfinity;
      return res;
    }
    const int shells = static_cast<int>(
        std::ceil(std::log(h * std::pow(rho, cfg.nd_shells_below_h) / L) / std::log(rho)));
    std::vector<std::pair<double, double>> nodes;
    double hi = L;
    for (int m = 0; m < shells; ++m) {
      shell_nodes(hi * rho, hi, cfg.panels_per_shell, nodes);
      hi *= rho;
    }
    for (auto& [u, lw] : nodes) lw -= (ak * p + 1.0) * std::log(u);
    nodes.emplace_back(hi, -ak * p * std::log(hi) - std::log(p - ak * p));
    unodes[k] = std::move(nodes);
  }
  // Axis points depend on one u node each; contractions of the leading axes
  // are kept while only trailing u nodes change.
  std::vector<std::vector<std::vector<AxisPoint>>> pts(d);
  for (int k = 0; k < d; ++k)
    for (const auto& node : unodes[k]) pts[k].push_back(axis_points(n, h, L, node.first, 2));
  // level[k]: rows x n x stride tensor after contracting axes < k, with
  // the accumulated point weight of each row.
  std::vector<std::vector<double>> level(d), row_weight(d);
  level[0] = f.values();
  row_weight[0] = {1.0};
  std::vector<double> vals, wts;
  auto contract = [&](int k, const std::vector<AxisPoint>& P) {
    const auto& T = level[k];
    const std::size_t rows = row_weight[k].size();
    const std::size_t stride = T.size() / (rows * n);
    auto& out = level[k + 1];
    auto& rw = row_weight[k + 1];
    out.assign(rows * P.size() * stride, 0.0);
    rw.resize(rows * P.size());
    for (std::size_t r = 0; r < rows; ++r) {
      const double* base = T.data() + r * n * stride;
      for (std::size_t q = 0; q < P.size(); ++q) {
        double* dst = out.data() + (r * P.size() + q) * stride;
        rw[r * P.size() + q] = row_weight[k][r] * P[q].weight;
        for (const auto& e : P[q].v) {
          if (e.weight == 0.0) continue;
          const double* src = base + static_cast<std::size_t>(e.index) * stride;
          for (std::size_t s2 = 0; s2 < stride; ++s2) dst[s2] += e.weight * src[s2];
        }
      }
    }
  };
  auto leaves = [&](const std::vector<AxisPoint>& P) {
    const auto& T = level[d - 1];
    const auto& W = row_weight[d - 1];
    vals.resize(W.size() * P.size());
    wts.resize(vals.size());
    double M = 0.0;
    std::size_t i = 0;
    for (std::size_t r = 0; r < W.size(); ++r) {
      const double* base = T.data() + r * n;
      for (const auto& pt : P) {
        const double v = std::abs(pt.v[0].weight * base[pt.v[0].index] + pt.v[1].weight * base[pt.v[1].index] +
                                  pt.v[2].weight * base[pt.v[2].index] + pt.v[3].weight * base[pt.v[3].index]);
        vals[i] = v;
        wts[i++] = W[r] * pt.weight;
        M = std::max(M, v);
      }
    }
    if (M == 0.0) return kNegInf;
    const double inv = 1.0 / M;
    double S = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) S += wts[k] * pow_abs(vals[k] * inv, p);
    return p * std::log(M) + std::log(S);
  };
  double log_sum = kNegInf, log_tail = kNegInf;
  std::vector<std::size_t> it(d, 0);
  int dirty = 0;
  while (true) {
    double lw = 0.0;
    bool tail = false;
    for (int k = 0; k < d; ++k) {
      lw += unodes[k][it[k]].second;
      tail |= it[k] + 1 == unodes[k].size();
    }
    for (int k = dirty; k < d - 1; ++k) contract(k, pts[k][it[k]]);
    const double lj = leaves(pts[d - 1][it[d - 1]]);
    if (lj != kNegInf) {
      log_sum = log_add(log_sum, lw + lj);
      if (tail) log_tail = log_add(log_tail, lw + lj);
    }
    int k = d - 1;
    while (k >= 0 && ++it[k] == unodes[k].size()) it[k--] = 0;
    if (k < 0) break;
    dirty = k;
  }
  if (log_sum == kNegInf) return res;
  res.tail_fraction = std::exp(log_tail - log_sum);
  res.value = std::exp((d * std::log(2.0) + log_sum) / p);
  return res;
}

}  // namespace fsgl
