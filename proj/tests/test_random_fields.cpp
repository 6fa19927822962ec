#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fsgl/error.hpp"
#include "fsgl/norms.hpp"
#include "fsgl/random_fields.hpp"

using namespace fsgl;

namespace {

double abs_moment(double p) { return std::pow(2.0, p / 2) * std::tgamma((p + 1) / 2) / std::sqrt(M_PI); }

struct Moments {
  double var_end = 0, var_mid = 0, cov = 0;
};

// Sample second moments of X(1), X(1/2) and their covariance, with X(0) = 0 checked.
Moments path_moments(const RandomFieldModel& m, int paths, bool force = false) {
  RandomFieldModel model = m;
  model.force_cholesky = force;
  const PathSampler sampler(model);
  Moments r;
  const int n = sampler.lattice_size();
  for (int i = 0; i < paths; ++i) {
    const auto w = sampler(i);
    CHECK(w[0] == 0.0);
    const double a = w[n - 1], b = w[(n - 1) / 2];
    r.var_end += a * a;
    r.var_mid += b * b;
    r.cov += a * b;
  }
  r.var_end /= paths;
  r.var_mid /= paths;
  r.cov /= paths;
  return r;
}

}  // namespace

TEST_CASE("field kinds parse") {
  CHECK(field_kind_from_string("bm") == FieldKind::brownian_motion);
  CHECK(field_kind_from_string("fbm") == FieldKind::fractional_brownian_motion);
  CHECK(field_kind_from_string("sheet") == FieldKind::brownian_sheet);
  CHECK(field_kind_from_string(to_string(FieldKind::brownian_sheet)) == FieldKind::brownian_sheet);
  CHECK_THROWS(field_kind_from_string("levy"));
  RandomFieldModel bad;
  bad.kind = FieldKind::fractional_brownian_motion;
  bad.hurst = 1.2;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("paths are reproducible by index") {
  RandomFieldModel m;
  m.n = 129;
  m.seed = 42;
  const auto a = sample_path(m, 3), b = sample_path(m, 3), c = sample_path(m, 4);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
}

TEST_CASE("Brownian motion covariance") {
  RandomFieldModel m;
  m.n = 65;
  const auto r = path_moments(m, 4000);
  CHECK(r.var_end == doctest::Approx(1.0).epsilon(0.08));
  CHECK(r.var_mid == doctest::Approx(0.5).epsilon(0.08));
  CHECK(r.cov == doctest::Approx(0.5).epsilon(0.08));
}

TEST_CASE("fractional Brownian motion covariance, circulant and Cholesky") {
  for (double H : {0.3, 0.75}) {
    RandomFieldModel m;
    m.kind = FieldKind::fractional_brownian_motion;
    m.hurst = H;
    m.n = 65;
    const double vm = std::pow(0.5, 2 * H);
    const double cov = 0.5 * (1.0 + vm - vm);
    for (bool force : {false, true}) {
      const auto r = path_moments(m, 4000, force);
      CHECK(r.var_end == doctest::Approx(1.0).epsilon(0.08));
      CHECK(r.var_mid == doctest::Approx(vm).epsilon(0.08));
      CHECK(r.cov == doctest::Approx(cov).epsilon(0.1));
    }
  }
}

TEST_CASE("fBm increments scale as h^H") {
  RandomFieldModel m;
  m.kind = FieldKind::fractional_brownian_motion;
  m.hurst = 0.3;
  m.n = 1025;
  McConfig mc;
  mc.paths = 400;
  mc.batches = 4;
  const auto g = mc_gap_moments(m, {2.0}, {{1}, {16}, {256}}, mc);
  const double h = g.h;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < g.gaps.size(); ++i) {
    x.push_back(g.gaps[i][0] * h);
    y.push_back(g.est[i][0].value);
  }
  const double s1 = std::log(y[1] / y[0]) / std::log(x[1] / x[0]);
  const double s2 = std::log(y[2] / y[1]) / std::log(x[2] / x[1]);
  CHECK(s1 == doctest::Approx(0.6).epsilon(0.05));
  CHECK(s2 == doctest::Approx(0.6).epsilon(0.05));
}

TEST_CASE("Brownian sheet box increments") {
  RandomFieldModel m;
  m.kind = FieldKind::brownian_sheet;
  m.n = 17;
  const PathSampler s(m);
  double v11 = 0, vhh = 0, cross = 0;
  const int N = 4000;
  for (int i = 0; i < N; ++i) {
    const auto w = s(i);
    const int z0[2] = {0, 5};
    CHECK(w.at(z0) == 0.0);
    const int a[2] = {16, 16}, b[2] = {8, 8};
    v11 += w.at(a) * w.at(a);
    vhh += w.at(b) * w.at(b);
    // two disjoint boxes [0,1/2]^2 and [1/2,1]^2 are uncorrelated
    const int lo[2] = {8, 8}, hi[2] = {16, 16}, o[2] = {0, 0};
    cross += rectangle_difference(w, o, lo) * rectangle_difference(w, lo, hi);
  }
  CHECK(v11 / N == doctest::Approx(1.0).epsilon(0.08));
  CHECK(vhh / N == doctest::Approx(0.25).epsilon(0.08));
  CHECK(std::abs(cross / N) < 0.02);
}

TEST_CASE("gap ladder") {
  const auto g = gap_ladder(100);
  CHECK(g.front() == 1);
  CHECK(g.back() == 100);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("moment estimates do not depend on the worker count") {
  RandomFieldModel m;
  m.n = 257;
  McConfig mc;
  mc.paths = 120;
  mc.batches = 6;
  mc.workers = 1;
  const auto a = mc_gap_moments(m, {2.0, 5.0}, {{1}, {8}, {64}}, mc);
  mc.workers = 3;
  const auto b = mc_gap_moments(m, {2.0, 5.0}, {{1}, {8}, {64}}, mc);
  for (std::size_t g = 0; g < a.est.size(); ++g)
    for (std::size_t j = 0; j < a.est[g].size(); ++j) {
      CHECK(a.est[g][j].value == b.est[g][j].value);
      CHECK(a.est[g][j].standard_error == b.est[g][j].standard_error);
    }
}

TEST_CASE("rectangle moment of Brownian increments") {
  RandomFieldModel m;
  m.n = 65;
  McConfig mc;
  mc.paths = 2000;
  mc.batches = 10;
  const auto e = mc_rectangle_moment(m, 2.0, {{{0}, {16}}, {{16}, {48}}}, mc);
  // mean of E|increment|^2 over lengths 1/4 and 1/2
  CHECK(e.value == doctest::Approx(0.375).epsilon(4 * e.standard_error / 0.375 + 0.02));
}

TEST_CASE("theta for Brownian motion matches its closed form") {
  RandomFieldModel m;
  m.n = 1025;
  McConfig mc;
  mc.paths = 400;
  mc.batches = 4;
  const double alpha = 0.4;
  const FractionalIndex a = FractionalIndex::uniform(alpha, 1);
  const auto th = theta_natural(m, a, {3.0, 5.0}, mc);
  for (std::size_t i = 0; i < th.p.size(); ++i) {
    const double p = th.p[i];
    const double e = p / 2 - alpha * p;
    const double inner = 2 * abs_moment(p) * (1 / e - 1 / (e + 1));
    const double exact = psi_alpha_coefficient(a, p) * std::pow(inner, 1 / p);
    CHECK_FALSE(th.divergent[i]);
    CHECK(th.value[i] == doctest::Approx(exact).epsilon(0.03));
  }
  REQUIRE(th.psi);
}

TEST_CASE("theta diverges when alpha exceeds the Hurst index") {
  RandomFieldModel m;
  m.n = 257;
  McConfig mc;
  mc.paths = 100;
  mc.batches = 2;
  const auto th = theta_natural(m, FractionalIndex::uniform(0.6, 1), {3.0, 4.0}, mc);
  CHECK(th.divergent[0]);
  CHECK(std::isinf(th.value[0]));
}

TEST_CASE("moment bound on the modulus holds on Brownian paths") {
  RandomFieldModel m;
  m.n = 1025;
  McConfig mc;
  mc.paths = 200;
  mc.batches = 4;
  const auto r = thm41_experiment(m, FractionalIndex::uniform(0.4, 1), {{0.1}, {0.01}, {0.002}}, {3.0, 4.0, 8.0}, mc);
  CHECK(r.holding_cells() == r.rows.size());
  CHECK(r.A == 3.0);
}

TEST_CASE("Brownian parameters for the log-modulus experiment") {
  const auto p = brownian_thm42_params(0.25);
  CHECK(p.alpha_exp == doctest::Approx(2.5));
  CHECK(p.beta.at(0) == doctest::Approx(0.25));
  CHECK(p.K == doctest::Approx(abs_moment(2.5)).epsilon(1e-12));
}

TEST_CASE("parallel_for runs every unit and rethrows") {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](int u) { sum += u; });
  CHECK(sum == 4950);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int u) {
                    if (u == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("Monte Carlo configuration is validated") {
  McConfig mc;
  mc.paths = 50;
  CHECK_THROWS(mc.validate());
  mc.paths = 200;
  mc.batches = 0;
  CHECK_THROWS(mc.validate());
}
