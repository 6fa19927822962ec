#include "fsgl/random_fields.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "fsgl/certificates.hpp"
#include "fsgl/error.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/quadrature.hpp"
#include "fsgl/rng.hpp"

namespace fsgl {

namespace {

constexpr int kCholeskyCap = 1025;
constexpr std::uint64_t kStreamStride = std::uint64_t{1} << 40;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex, FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n) { return FftwBuffer(fftw_alloc_complex(n)); }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double fgn_autocovariance(int k, double H) {
  const double a = std::abs(k + 1.0), b = std::abs(double(k)), c = std::abs(k - 1.0);
  return 0.5 * (std::pow(a, 2 * H) - 2.0 * std::pow(b, 2 * H) + std::pow(c, 2 * H));
}

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::brownian_motion: return "brownian_motion";
    case FieldKind::fractional_brownian_motion: return "fractional_brownian_motion";
    case FieldKind::brownian_sheet: return "brownian_sheet";
  }
  return "unknown";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "brownian_motion" || s == "bm") return FieldKind::brownian_motion;
  if (s == "fractional_brownian_motion" || s == "fbm") return FieldKind::fractional_brownian_motion;
  if (s == "brownian_sheet" || s == "sheet") return FieldKind::brownian_sheet;
  throw ConfigError("unknown field kind '" + s + "'");
}

void RandomFieldModel::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0,1)");
  if (n < 3) throw DomainError("path resolution n must be at least 3");
  const double points = std::pow(double(n), dim());
  if (points > double(GridLimits{}.max_points)) throw CapExceeded("path lattice exceeds the point cap");
}

struct PathSampler::Impl {
  FieldKind kind;
  int n;
  double h;
  double hurst;
  std::uint64_t seed;
  // circulant route
  int m = 0;
  std::vector<double> sqrt_lambda;
  fftw_plan plan = nullptr;
  // Cholesky route
  Eigen::MatrixXd chol;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

PathSampler::PathSampler(const RandomFieldModel& model) : model_(model), n_(model.n) {
  model.validate();
  auto impl = std::make_shared<Impl>();
  impl->kind = model.kind;
  impl->hurst = model.hurst;
  impl->seed = model.seed;
  if (model.kind == FieldKind::fractional_brownian_motion) {
    const int N = model.n - 1;
    bool circulant_ok = !model.force_cholesky;
    if (circulant_ok) {
      const int M = 2 * N;
      auto in = fftw_buffer(M), out = fftw_buffer(M);
      for (int j = 0; j < M; ++j) {
        const int k = j <= N ? j : M - j;
        in.get()[j][0] = fgn_autocovariance(k, model.hurst);
        in.get()[j][1] = 0.0;
      }
      {
        std::lock_guard<std::mutex> lock(planner_mutex());
        impl->plan = fftw_plan_dft_1d(M, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
      }
      fftw_execute(impl->plan);
      double lmax = 0.0, lmin = 0.0;
      for (int j = 0; j < M; ++j) {
        lmax = std::max(lmax, out.get()[j][0]);
        lmin = std::min(lmin, out.get()[j][0]);
      }
      if (lmin < -1e-10 * lmax) {
        circulant_ok = false;
        std::ostringstream os;
        os << "circulant embedding has a negative eigenvalue (" << lmin << "); Cholesky fallback at n="
           << std::min(model.n, kCholeskyCap);
        warning_ = os.str();
      } else {
        impl->m = M;
        impl->sqrt_lambda.resize(M);
        for (int j = 0; j < M; ++j) impl->sqrt_lambda[j] = std::sqrt(std::max(out.get()[j][0], 0.0) / M);
      }
    }
    if (!circulant_ok) {
      n_ = std::min(model.n, kCholeskyCap);
      const int k = n_ - 1;
      Eigen::MatrixXd cov(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double t = double(i + 1) / k, s = double(j + 1) / k;
          cov(i, j) = 0.5 * (std::pow(t, 2 * model.hurst) + std::pow(s, 2 * model.hurst) -
                             std::pow(std::abs(t - s), 2 * model.hurst));
        }
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() != Eigen::Success)
        throw DomainError(
            "fractional Brownian covariance is not positive definite at round-off; retry with a smaller n "
            "or a Hurst index away from the ends of (0,1)");
      impl->chol = llt.matrixL();
    }
  }
  impl->n = n_;
  impl->h = 1.0 / (n_ - 1);
  impl_ = std::move(impl);
}

GridFunction PathSampler::operator()(std::uint64_t index) const {
  const Impl& im = *impl_;
  auto rng = stream_rng(im.seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = im.n;
  std::vector<double> v;
  switch (im.kind) {
    case FieldKind::brownian_motion: {
      v.assign(n, 0.0);
      const double s = std::sqrt(im.h);
      for (int i = 1; i < n; ++i) v[i] = v[i - 1] + s * normal(rng);
      return GridFunction(1, n, std::move(v));
    }
    case FieldKind::fractional_brownian_motion: {
      v.assign(n, 0.0);
      if (im.m > 0) {
        const int M = im.m;
        auto in = fftw_buffer(M), out = fftw_buffer(M);
        for (int j = 0; j < M; ++j) {
          in.get()[j][0] = im.sqrt_lambda[j] * normal(rng);
          in.get()[j][1] = im.sqrt_lambda[j] * normal(rng);
        }
        fftw_execute_dft(im.plan, in.get(), out.get());
        const double scale = std::pow(im.h, im.hurst);
        for (int i = 1; i < n; ++i) v[i] = v[i - 1] + scale * out.get()[i - 1][0];
      } else {
        Eigen::VectorXd z(n - 1);
        for (int i = 0; i < n - 1; ++i) z[i] = normal(rng);
        const Eigen::VectorXd x = im.chol * z;
        for (int i = 1; i < n; ++i) v[i] = x[i - 1];
      }
      return GridFunction(1, n, std::move(v));
    }
    case FieldKind::brownian_sheet: {
      v.assign(std::size_t(n) * n, 0.0);
      for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
          v[std::size_t(i) * n + j] = im.h * normal(rng) + v[std::size_t(i - 1) * n + j] +
                                      v[std::size_t(i) * n + j - 1] - v[std::size_t(i - 1) * n + j - 1];
      return GridFunction(2, n, std::move(v));
    }
  }
  throw DomainError("unknown field kind");
}

GridFunction sample_path(const RandomFieldModel& model, std::uint64_t index) {
  return PathSampler(model)(index);
}

void McConfig::validate() const {
  if (paths < 100) throw DomainError("Monte Carlo needs at least 100 paths");
  if (batches < 1 || batches > paths) throw DomainError("batches must lie in [1, paths]");
  if (workers < 1) throw DomainError("workers must be positive");
  if (positions < 1) throw DomainError("positions must be positive");
  if (!(heavy_tail_rse > 0.0)) throw DomainError("heavy_tail_rse must be positive");
}

void parallel_for(int units, int workers, const std::function<void(int)>& body) {
  if (units <= 0) return;
  workers = std::clamp(workers, 1, units);
  if (workers == 1) {
    for (int u = 0; u < units; ++u) body(u);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int u; (u = next.fetch_add(1)) < units;) {
        try {
          body(u);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// Sums of per-path values and their squares, accumulated per batch and
// combined in batch order so results do not depend on scheduling.
struct Accumulator {
  long double sum = 0.0L, sumsq = 0.0L;
  void add(double x) {
    sum += x;
    sumsq += static_cast<long double>(x) * x;
  }
  void merge(const Accumulator& o) {
    sum += o.sum;
    sumsq += o.sumsq;
  }
};

MomentEstimate finish(const Accumulator& a, int paths, double p) {
  MomentEstimate e;
  e.paths = paths;
  e.p = p;
  const long double mean = a.sum / paths;
  const long double var = std::max(0.0L, (a.sumsq - paths * mean * mean) / (paths - 1));
  e.value = static_cast<double>(mean);
  e.standard_error = static_cast<double>(std::sqrt(var / paths));
  return e;
}

std::pair<int, int> batch_range(int b, const McConfig& mc) {
  const long long lo = static_cast<long long>(mc.paths) * b / mc.batches;
  const long long hi = static_cast<long long>(mc.paths) * (b + 1) / mc.batches;
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

// Runs per_path(path_index, sample, out) over all paths, where `out` holds
// `width` values per path, and returns the per-component accumulators.
std::vector<Accumulator> accumulate_paths(
    const PathSampler& sampler, const McConfig& mc, std::uint64_t stream, std::size_t width,
    const std::function<void(const GridFunction&, std::vector<double>&)>& per_path) {
  std::vector<std::vector<Accumulator>> partial(mc.batches, std::vector<Accumulator>(width));
  parallel_for(mc.batches, mc.workers, [&](int b) {
    const auto [lo, hi] = batch_range(b, mc);
    std::vector<double> out(width);
    for (int i = lo; i < hi; ++i) {
      const GridFunction f = sampler(stream * kStreamStride + std::uint64_t(i));
      per_path(f, out);
      for (std::size_t k = 0; k < width; ++k) partial[b][k].add(out[k]);
    }
  });
  std::vector<Accumulator> total(width);
  for (const auto& pb : partial)
    for (std::size_t k = 0; k < width; ++k) total[k].merge(pb[k]);
  return total;
}

std::vector<int> stratified_starts(int span, int count) {
  // span = number of admissible starts
  if (span <= count) {
    std::vector<int> all(span);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<int> s;
  for (int i = 0; i < count; ++i) {
    const int v = count == 1 ? 0 : static_cast<int>(std::lround(double(i) * (span - 1) / (count - 1)));
    if (s.empty() || v != s.back()) s.push_back(v);
  }
  return s;
}

double pow_abs(double x, double p) {
  x = std::abs(x);
  if (p == 2.0) return x * x;
  if (p == 4.0) return (x * x) * (x * x);
  return std::pow(x, p);
}

double box_difference(const GridFunction& f, const std::vector<int>& x, const std::vector<int>& g) {
  if (f.dim() == 1) return f[x[0] + g[0]] - f[x[0]];
  const std::size_t n = f.size();
  const std::size_t a = x[0], b = x[1], A = a + g[0], B = b + g[1];
  return f[A * n + B] - f[a * n + B] - f[A * n + b] + f[a * n + b];
}

}  // namespace

MomentEstimate mc_rectangle_moment(const RandomFieldModel& model, double p, const std::vector<IndexPair>& pairs,
                                   const McConfig& mc) {
  mc.validate();
  if (!(p >= 1.0)) throw DomainError("moment order p must be at least 1");
  if (pairs.empty()) throw DomainError("no index pairs to average over");
  PathSampler sampler(model);
  const int d = model.dim(), n = sampler.lattice_size();
  for (const auto& pr : pairs) {
    if (int(pr.x.size()) != d || int(pr.y.size()) != d) throw DomainError("index pair dimension mismatch");
    for (int k = 0; k < d; ++k)
      if (pr.x[k] < 0 || pr.y[k] < 0 || pr.x[k] >= n || pr.y[k] >= n)
        throw DomainError("index pair outside the lattice");
  }
  const auto acc = accumulate_paths(sampler, mc, 0, 1, [&](const GridFunction& f, std::vector<double>& out) {
    double s = 0.0;
    for (const auto& pr : pairs) s += pow_abs(rectangle_difference(f, pr.x, pr.y), p);
    out[0] = s / pairs.size();
  });
  return finish(acc[0], mc.paths, p);
}

std::vector<int> gap_ladder(int max_steps) {
  if (max_steps < 1) throw DomainError("gap ladder needs max_steps >= 1");
  std::vector<int> g;
  for (double x = 1.0; x <= max_steps * (1.0 + 1e-12); x *= std::sqrt(2.0)) {
    const int v = static_cast<int>(std::lround(x));
    if (v <= max_steps && (g.empty() || v != g.back())) g.push_back(v);
  }
  if (g.back() != max_steps) g.push_back(max_steps);
  return g;
}

GapMoments mc_gap_moments(const RandomFieldModel& model, const std::vector<double>& p,
                          const std::vector<std::vector<int>>& gaps, const McConfig& mc, std::uint64_t stream) {
  mc.validate();
  if (p.empty() || gaps.empty()) throw DomainError("gap moments need exponents and gaps");
  for (double q : p)
    if (!(q > 0.0 && std::isfinite(q))) throw DomainError("moment exponents must be positive and finite");
  PathSampler sampler(model);
  const int d = model.dim(), n = sampler.lattice_size();
  const int per_axis =
      d == 1 ? mc.positions : std::max(1, static_cast<int>(std::ceil(std::sqrt(double(mc.positions)))));

  // Start positions per gap vector.
  std::vector<std::vector<std::vector<int>>> starts(gaps.size());
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    if (int(gaps[g].size()) != d) throw DomainError("gap vector dimension mismatch");
    std::vector<std::vector<int>> axis(d);
    for (int k = 0; k < d; ++k) {
      const int gk = gaps[g][k];
      if (gk < 1 || gk > n - 1) throw DomainError("gap outside the lattice");
      axis[k] = stratified_starts(n - gk, per_axis);
    }
    if (d == 1) {
      for (int s : axis[0]) starts[g].push_back({s});
    } else {
      for (int a : axis[0])
        for (int b : axis[1]) starts[g].push_back({a, b});
    }
  }

  const std::size_t np = p.size();
  const auto acc = accumulate_paths(
      sampler, mc, stream, gaps.size() * np, [&](const GridFunction& f, std::vector<double>& out) {
        for (std::size_t g = 0; g < gaps.size(); ++g) {
          std::fill(out.begin() + g * np, out.begin() + (g + 1) * np, 0.0);
          for (const auto& x : starts[g]) {
            const double v = box_difference(f, x, gaps[g]);
            for (std::size_t j = 0; j < np; ++j) out[g * np + j] += pow_abs(v, p[j]);
          }
          for (std::size_t j = 0; j < np; ++j) out[g * np + j] /= starts[g].size();
        }
      });

  GapMoments gm;
  gm.gaps = gaps;
  gm.p = p;
  gm.h = 1.0 / (n - 1);
  gm.est.assign(gaps.size(), std::vector<MomentEstimate>(np));
  for (std::size_t g = 0; g < gaps.size(); ++g)
    for (std::size_t j = 0; j < np; ++j) gm.est[g][j] = finish(acc[g * np + j], mc.paths, p[j]);
  return gm;
}

namespace {

// Integral over [0,1]^d of prod (1-u_k) m(u) prod u_k^{-alpha_k p - 1} du, in
// s = log u: log m is multilinear on the ladder tensor, Gauss points inside
// each ladder cell, and a power-law tail below the first node fitted from
// the first two nodes of each axis.
class LadderIntegral {
 public:
  LadderIntegral(std::vector<double> s, int d, std::vector<double> log_m, std::vector<double> alpha, double p,
                 double margin)
      : s_(std::move(s)), d_(d), log_m_(std::move(log_m)), alpha_(std::move(alpha)), p_(p), margin_(margin) {}

  // Returns log of the integral; +inf when the tail diverges.
  double log_value() const {
    std::vector<double> point(d_);
    std::vector<int> cell(d_);
    return axis(0, point, cell);
  }

 private:
  double log_integrand(const std::vector<double>& point, const std::vector<int>& cell) const {
    // Multilinear interpolation of log m in s.
    const int L = static_cast<int>(s_.size());
    double acc = 0.0;
    for (int corner = 0; corner < (1 << d_); ++corner) {
      double w = 1.0;
      std::size_t flat = 0;
      for (int k = 0; k < d_; ++k) {
        const int i = cell[k];
        const double t = (point[k] - s_[i]) / (s_[i + 1] - s_[i]);
        const int bit = (corner >> k) & 1;
        w *= bit ? t : 1.0 - t;
        flat = flat * L + (i + bit);
      }
      if (w != 0.0) acc += w * log_m_[flat];
    }
    for (int k = 0; k < d_; ++k) {
      const double u = std::exp(point[k]);
      acc += -alpha_[k] * p_ * point[k] + std::log1p(-std::min(u, 1.0 - 1e-300));
    }
    return acc;
  }

  // Value at a ladder node on axis k: used for the tail fit.
  double node_log(int k, int node, std::vector<double>& point, std::vector<int>& cell) const {
    const int L = static_cast<int>(s_.size());
    point[k] = s_[node];
    cell[k] = std::min(node, L - 2);
    return k + 1 == d_ ? log_integrand(point, cell) : axis(k + 1, point, cell);
  }

  double axis(int k, std::vector<double>& point, std::vector<int>& cell) const {
    const int L = static_cast<int>(s_.size());
    const auto& gl = gauss_legendre(8);
    double total = -kInfinity;
    for (int i = 0; i + 1 < L; ++i) {
      const double a = s_[i], b = s_[i + 1];
      // u = 1 has zero weight; stop the last cell just short of it.
      const double hi = (b >= 0.0) ? std::min(b, -1e-12) : b;
      if (!(hi > a)) continue;
      const double half = 0.5 * (hi - a), mid = 0.5 * (hi + a);
      for (std::size_t q = 0; q < gl.x.size(); ++q) {
        point[k] = mid + half * gl.x[q];
        cell[k] = i;
        const double inner = k + 1 == d_ ? log_integrand(point, cell) : axis(k + 1, point, cell);
        if (std::isinf(inner) && inner > 0) return kInfinity;
        total = log_add(total, std::log(half * gl.w[q]) + inner);
      }
    }
    // Tail below s_0: g(s) ~ g(s_0) exp(b (s - s_0)), integral g(s_0)/b.
    const double g0 = node_log(k, 0, point, cell);
    const double g1 = node_log(k, 1, point, cell);
    if (std::isinf(g0) && g0 > 0) return kInfinity;
    const double slope = (g1 - g0) / (s_[1] - s_[0]);
    if (!(slope > margin_)) return kInfinity;
    return log_add(total, g0 - std::log(slope));
  }

  std::vector<double> s_;
  int d_;
  std::vector<double> log_m_;
  std::vector<double> alpha_;
  double p_;
  double margin_;
};

}  // namespace

ThetaResult theta_natural(const RandomFieldModel& model, const FractionalIndex& alpha,
                          const std::vector<double>& p_grid, const McConfig& mc) {
  const int d = model.dim();
  if (alpha.dim() != d) throw DomainError("smoothness vector dimension differs from the field dimension");
  if (p_grid.empty()) throw DomainError("theta needs a non-empty p-grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] > alpha.p0()) || !std::isfinite(p_grid[i]))
      throw DomainError("theta p-grid must lie in (1/min alpha_k, inf)");
    if (i && !(p_grid[i] > p_grid[i - 1])) throw DomainError("theta p-grid must be increasing");
  }
  PathSampler sampler(model);
  const int n = sampler.lattice_size();
  const std::vector<int> ladder = gap_ladder(n - 1);
  const int L = static_cast<int>(ladder.size());
  if (L < 2) throw DomainError("lattice too coarse for the gap ladder");

  std::vector<std::vector<int>> gaps;
  if (d == 1) {
    for (int g : ladder) gaps.push_back({g});
  } else {
    for (int a : ladder)
      for (int b : ladder) gaps.push_back({a, b});
  }

  ThetaResult r;
  r.p = p_grid;
  r.moments = mc_gap_moments(model, p_grid, gaps, mc, 0);
  const double h = r.moments.h;
  std::vector<double> s(L);
  for (int i = 0; i < L; ++i) s[i] = std::log(ladder[i] * h);

  const std::size_t np = p_grid.size();
  r.value.assign(np, kInfinity);
  r.divergent.assign(np, false);
  r.heavy_tail.assign(np, false);
  bool cut = false;
  for (std::size_t j = 0; j < np; ++j) {
    std::vector<double> log_m(gaps.size());
    for (std::size_t g = 0; g < gaps.size(); ++g) {
      const auto& e = r.moments.est[g][j];
      if (!(e.value > 0.0) || !std::isfinite(e.value) || e.standard_error > mc.heavy_tail_rse * e.value)
        r.heavy_tail[j] = true;
      log_m[g] = e.value > 0.0 ? std::log(e.value) : -kInfinity;
    }
    if (cut || r.heavy_tail[j]) {
      cut = true;
      continue;
    }
    const double lv = LadderIntegral(s, d, log_m, alpha.alpha, p_grid[j], 1e-6).log_value();
    if (std::isinf(lv) && lv > 0) {
      r.divergent[j] = true;
      cut = true;
      continue;
    }
    const double log_inner = d * std::log(2.0) + lv;
    r.value[j] = psi_alpha_coefficient(alpha, p_grid[j]) * std::exp(log_inner / p_grid[j]);
  }

  std::vector<double> fp, fv;
  for (std::size_t j = 0; j < np; ++j)
    if (std::isfinite(r.value[j])) {
      fp.push_back(p_grid[j]);
      fv.push_back(r.value[j]);
    }
  r.truncated = !std::isfinite(r.value.back());
  if (fp.size() == 1) {
    r.psi = PsiFunction::degenerate(fp[0], fv[0]);
  } else if (fp.size() >= 2) {
    r.psi = PsiFunction::tabulated(fp, fv, kNaN, r.truncated ? kNaN : kInfinity);
  }
  return r;
}

ModulusSamples sample_moduli(const RandomFieldModel& model, const std::vector<std::vector<double>>& delta_grid,
                             const McConfig& mc, std::uint64_t stream) {
  mc.validate();
  const int d = model.dim();
  if (delta_grid.empty()) throw DomainError("empty delta grid");
  for (const auto& dv : delta_grid) {
    if (int(dv.size()) != d) throw DomainError("delta vector dimension mismatch");
    for (double x : dv)
      if (!(x > 0.0)) throw DomainError("delta components must be positive");
  }
  PathSampler sampler(model);
  ModulusSamples ms;
  ms.delta = delta_grid;
  ms.omega.assign(mc.paths, std::vector<double>(delta_grid.size()));
  parallel_for(mc.batches, mc.workers, [&](int b) {
    const auto [lo, hi] = batch_range(b, mc);
    for (int i = lo; i < hi; ++i) {
      const GridFunction f = sampler(stream * kStreamStride + std::uint64_t(i));
      if (d == 1) {
        for (std::size_t c = 0; c < delta_grid.size(); ++c)
          ms.omega[i][c] = modulus_of_continuity(f, delta_grid[c][0]);
      } else {
        const RectangleModulusTable table(f);
        for (std::size_t c = 0; c < delta_grid.size(); ++c) ms.omega[i][c] = table(delta_grid[c]);
      }
    }
  });
  return ms;
}

std::size_t Thm41Report::holding_cells() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const Thm41Row& r) { return r.holds; }));
}

namespace {

double product(const std::vector<double>& v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

double power_product(const std::vector<double>& delta, const std::vector<double>& alpha) {
  double p = 1.0;
  for (std::size_t k = 0; k < delta.size(); ++k) p *= std::pow(delta[k], alpha[k]);
  return p;
}

}  // namespace

Thm41Report thm41_experiment(const RandomFieldModel& model, const FractionalIndex& alpha,
                             const std::vector<std::vector<double>>& delta_grid,
                             const std::vector<double>& p_grid, const McConfig& mc) {
  Thm41Report rep;
  rep.theta = theta_natural(model, alpha, p_grid, mc);
  if (!rep.theta.psi) throw DomainError("theta has empty support on the p-grid");
  const PsiFunction& theta = *rep.theta.psi;
  if (theta.is_degenerate()) throw DomainError("theta support is a single grid node; refine the p-grid");
  rep.A = theta.lower();

  const ModulusSamples ms = sample_moduli(model, delta_grid, mc, 1);
  std::vector<double> xs, ys;
  for (std::size_t c = 0; c < delta_grid.size(); ++c) {
    Accumulator acc;
    for (int i = 0; i < mc.paths; ++i) acc.add(std::pow(ms.omega[i][c], rep.A));
    const MomentEstimate raw = finish(acc, mc.paths, rep.A);
    Thm41Row row;
    row.delta = delta_grid[c];
    row.moment = raw;
    row.moment.value = std::pow(raw.value, 1.0 / rep.A);
    row.moment.standard_error =
        raw.value > 0.0 ? row.moment.value / (rep.A * raw.value) * raw.standard_error : 0.0;
    const double pd = product(delta_grid[c]);
    row.bound = power_product(delta_grid[c], alpha.alpha) / fundamental_function(theta, pd);
    row.slack = row.bound / row.moment.value;
    row.holds = row.moment.value <= row.bound + 3.0 * row.moment.standard_error;
    xs.push_back(pd);
    ys.push_back(row.bound);
    rep.rows.push_back(std::move(row));
  }
  rep.bound_slope = xs.size() >= 2 ? fit_loglog_slope(xs, ys) : kNaN;
  return rep;
}

Thm42Params brownian_thm42_params(double Delta) {
  if (!(Delta > 0.0)) throw DomainError("Delta must be positive");
  Thm42Params p;
  p.alpha_exp = 2.0 + 2.0 * Delta;
  p.beta = {Delta};
  // E|Z|^a = 2^{a/2} Gamma((a+1)/2) / sqrt(pi)
  p.K = std::exp(0.5 * p.alpha_exp * std::log(2.0) + std::lgamma(0.5 * (p.alpha_exp + 1.0)) -
                 0.5 * std::log(M_PI));
  return p;
}

Thm42Report thm42_experiment(const RandomFieldModel& model, const Thm42Params& params,
                             const std::vector<std::vector<double>>& delta_grid, const McConfig& mc,
                             const ModulusSamples* precomputed) {
  const int d = model.dim();
  if (!(params.alpha_exp > 0.0) || !(params.K > 0.0)) throw DomainError("alpha and K must be positive");
  if (int(params.beta.size()) != d) throw DomainError("beta dimension differs from the field dimension");
  for (const auto& dv : delta_grid)
    for (double x : dv)
      if (!(x > 0.0 && x <= std::exp(-1.0))) throw DomainError("delta components must lie in (0, 1/e]");

  Thm42Report rep;
  rep.params = params;
  for (double b : params.beta) rep.normalizer_exponent.push_back(b / params.alpha_exp);

  // Moment precondition on a ladder of gaps up to a quarter of the lattice.
  const PathSampler sampler(model);
  const int n = sampler.lattice_size();
  std::vector<std::vector<int>> gaps;
  for (int g : gap_ladder(std::max(1, (n - 1) / 4))) gaps.push_back(std::vector<int>(d, g));
  if (gaps.size() > 8) {
    std::vector<std::vector<int>> thin;
    const std::size_t step = (gaps.size() + 7) / 8;
    for (std::size_t i = 0; i < gaps.size(); i += step) thin.push_back(gaps[i]);
    gaps = std::move(thin);
  }
  const GapMoments gm = mc_gap_moments(model, {params.alpha_exp}, gaps, mc, 2);
  bool ok = true;
  std::ostringstream diag;
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    double ref = params.K;
    for (int k = 0; k < d; ++k) ref *= std::pow(gaps[g][k] * gm.h, 1.0 + params.beta[k]);
    const double ratio = gm.est[g][0].value / ref, se = gm.est[g][0].standard_error / ref;
    rep.precondition_gap.push_back(gaps[g][0] * gm.h);
    rep.precondition_ratio.push_back(ratio);
    rep.precondition_se.push_back(se);
    if (ratio > 1.0 + params.moment_tolerance + 3.0 * se) ok = false;
    diag << " gap=" << gaps[g][0] * gm.h << " ratio=" << ratio << " (se " << se << ")";
  }
  if (!ok) throw DomainError("moment condition E|box|^alpha <= K prod gap^{1+beta} fails:" + diag.str());

  ModulusSamples own;
  if (!precomputed) own = sample_moduli(model, delta_grid, mc, 1);
  const ModulusSamples& ms = precomputed ? *precomputed : own;
  if (ms.delta != delta_grid) throw DomainError("precomputed moduli use a different delta grid");

  const std::size_t cells = delta_grid.size();
  const double a = params.alpha_exp;
  std::vector<double> norm(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    double v = 1.0;
    for (int k = 0; k < d; ++k)
      v *= std::pow(delta_grid[c][k], params.beta[k] / a) * std::pow(std::abs(std::log(delta_grid[c][k])), 1.0 / a);
    norm[c] = v;
  }
  rep.delta = delta_grid;
  rep.mean_R.assign(cells, 0.0);
  rep.min_R.assign(cells, kInfinity);
  rep.max_R.assign(cells, 0.0);
  const int paths = static_cast<int>(ms.omega.size());
  double log_sum = -kInfinity;
  for (int i = 0; i < paths; ++i) {
    double sup = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      const double R = ms.omega[i][c] / norm[c];
      rep.mean_R[c] += R / paths;
      rep.min_R[c] = std::min(rep.min_R[c], R);
      rep.max_R[c] = std::max(rep.max_R[c], R);
      sup = std::max(sup, R);
    }
    log_sum = log_add(log_sum, a * std::log(sup));
  }
  const auto [lo, hi] = std::minmax_element(rep.mean_R.begin(), rep.mean_R.end());
  rep.spread = *hi / *lo;
  rep.fitted_C = std::exp((log_sum - std::log(double(paths))) / a) / std::pow(params.K, 1.0 / a);

  rep.exactness_floor = kNaN;
  if (d == 1) {
    std::size_t smallest = 0;
    for (std::size_t c = 1; c < cells; ++c)
      if (delta_grid[c][0] < delta_grid[smallest][0]) smallest = c;
    const double dl = delta_grid[smallest][0];
    const double ref = std::sqrt(dl * std::abs(std::log(dl)));
    double floor = kInfinity;
    for (int i = 0; i < paths; ++i) floor = std::min(floor, ms.omega[i][smallest] / ref);
    rep.exactness_floor = floor;
  }
  return rep;
}

TailReport tail_report(const RandomFieldModel& model, const FractionalIndex& alpha, double q,
                       const std::vector<double>& delta, const std::vector<double>& z_list,
                       const std::vector<double>& p_grid, const McConfig& mc) {
  TailReport rep;
  rep.q = q;
  rep.delta = delta;
  rep.theta = theta_natural(model, alpha, p_grid, mc);
  if (!rep.theta.psi || rep.theta.psi->is_degenerate())
    throw DomainError("theta support on the p-grid is too small for a truncated fundamental function");
  const PsiFunction& theta = *rep.theta.psi;
  const auto& tab = std::get<PsiFunction::Tabulated>(theta.rule());
  const double A = tab.p.front(), last = tab.p.back();
  if (!(q > A && q < last)) {
    std::ostringstream os;
    os << "tail report needs A < q < B on the theta grid: q=" << q << ", (A,B)=(" << A << ", " << last << ")";
    throw DomainError(os.str());
  }
  const double pd = product(delta);

  // psi_tail(q') = lambda(q', prod delta) tabulated at q and the theta nodes above it.
  std::vector<double> tp{q}, tv;
  for (double p : tab.p)
    if (p > q && p < last) tp.push_back(p);
  for (double p : tp) tv.push_back(1.0 / truncated_fundamental_function(theta, p, pd));
  const PsiFunction psi_tail = tp.size() >= 2 ? PsiFunction::tabulated(tp, tv) : PsiFunction::degenerate(tp[0], tv[0]);

  const ModulusSamples ms = sample_moduli(model, {delta}, mc, 1);
  const double scale = power_product(delta, alpha.alpha);
  for (double z : z_list) {
    TailRow row;
    row.z = z;
    int exceed = 0;
    for (const auto& om : ms.omega)
      if (om[0] / scale > z) ++exceed;
    const double N = double(ms.omega.size());
    row.empirical = exceed / N;
    row.binomial_se = std::sqrt(row.empirical * (1.0 - row.empirical) / N);
    row.applied = z >= 1.0;
    row.bound = row.applied ? tail_bound_from_psi(psi_tail, 1.0, z) : kNaN;
    row.valid = !row.applied || row.empirical <= row.bound + 3.0 * row.binomial_se;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace fsgl
