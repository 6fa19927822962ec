#include <doctest.h>

#include <cmath>

#include "fsgl/certificates.hpp"
#include "fsgl/error.hpp"

using namespace fsgl;

namespace {

GridFunction grid1(const std::function<double(double)>& f, int n) {
  return sample_function([&](std::span<const double> x) { return f(x[0]); }, 1, n);
}

}  // namespace

TEST_CASE("GRR bound formulas") {
  const double b = grr_bound_1d(0.5, 4.0, 0.01, 2.0);
  CHECK(b == doctest::Approx(8 * std::pow(4, 0.25) * 3.0 * std::pow(0.01, 0.25) * 2.0));
  const FractionalIndex a = FractionalIndex::uniform(0.5, 1);
  CHECK(grr_bound_nd(a, 4.0, {0.01}, 2.0) == doctest::Approx(b));
  CHECK_THROWS_AS(grr_bound_1d(0.5, 2.0, 0.1, 1.0), DomainError);
}

TEST_CASE("GRR bound dominates the modulus of smooth and rough functions") {
  for (auto f : std::vector<std::function<double(double)>>{[](double x) { return std::sin(7 * x); },
                                                          [](double x) { return std::sqrt(x); },
                                                          [](double x) { return std::abs(x - 0.3); }}) {
    const auto g = grid1(f, 1025);
    const double alpha = 0.4, p = 8.0;
    const double w = gagliardo_seminorm_1d(g, alpha, p).value;
    for (double delta : {0.5, 0.1, 0.01, 0.001})
      CHECK(modulus_of_continuity(g, delta) <= grr_bound_1d(alpha, p, delta, w));
  }
}

TEST_CASE("one-dimensional certificate holds for x with a degenerate psi") {
  const auto f = grid1([](double x) { return x; }, 513);
  const auto cert = certify_theorem_2_1(f, 0.5, PsiFunction::degenerate(4.0), {0.5, 0.1, 0.01, 0.001});
  CHECK(cert.all_hold());
  CHECK(cert.min_slack() > 1.0);
  CHECK(cert.norm == doctest::Approx(std::pow(1.0 / 3, 0.25)).epsilon(1e-4));
}

TEST_CASE("rectangle certificate for a product function") {
  const auto f = sample_function([](std::span<const double> x) { return x[0] * std::sin(2 * x[1]); }, 2, 33);
  const FractionalIndex alpha({0.5, 0.5});
  const auto cert = certify_theorem_3_1(f, alpha, PsiFunction::degenerate(4.0), {{0.5, 0.5}, {0.1, 0.25}, {0.05, 0.05}});
  CHECK(cert.all_hold());
}

TEST_CASE("Orlicz GRR integral with power Phi and power majorants") {
  // 8 integral_0^delta (4B/u^2)^{1/p} gamma u^{gamma-1} du
  const double p = 4.0, gamma = 1.0, B = 2.0, delta = 0.1;
  const double e = gamma - 2.0 / p;
  const double exact = 8.0 * std::pow(4.0 * B, 1.0 / p) * gamma * std::pow(delta, e) / e;
  const auto r = orlicz_grr_bound(YoungFunction::power(p), {DistanceMajorant::power(gamma)}, B, {delta});
  CHECK(r.status == SeminormStatus::ok);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-6));
  const auto div = orlicz_grr_bound(YoungFunction::power(p), {DistanceMajorant::power(0.4)}, B, {delta});
  CHECK(div.status == SeminormStatus::divergent);
}

TEST_CASE("Luxemburg norm for |u|^q is the Lq norm") {
  const auto f = grid1([](double x) { return std::cos(4 * x) + 0.2; }, 257);
  for (double q : {1.0, 2.0, 5.0})
    CHECK(luxemburg_norm(f, YoungFunction::power(q)) == doctest::Approx(lp_norm(f, q)).epsilon(1e-8));
}

TEST_CASE("exactness experiment rejects Delta outside the admissible range") {
  CHECK_THROWS_AS(exactness_experiment(0.5, 4.0, {0.1}, {0.8}), DomainError);
  CHECK_THROWS_AS(exactness_experiment(0.5, 1.5, {0.1}, {0.1}), DomainError);
  const auto t = exactness_experiment(0.5, 4.0, {1.0 / 16, 1.0 / 256}, {0.25}, 1025);
  REQUIRE(t.rows.size() == 2);
  for (const auto& r : t.rows) {
    CHECK(r.omega <= r.bound);
    // omega(f_Delta, delta) = delta^{alpha - 1/p + Delta} exactly for the power function
    CHECK(r.omega == doctest::Approx(std::pow(r.delta, 0.5)).epsilon(1e-9));
  }
}

TEST_CASE("scaling experiment recovers lambda^{alpha - 1/p}") {
  const auto t = scaling_experiment([](double x) { return x * x; }, 0.5, 4.0, {0.5, 0.25}, 1025);
  for (const auto& r : t.rows) CHECK(r.ratio == doctest::Approx(1.0).epsilon(0.01));
  CHECK(t.fitted_slope == doctest::Approx(0.25).epsilon(0.04));
}

TEST_CASE("log-log slope fit") {
  CHECK(fit_loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_loglog_slope({1}, {1}), DomainError);
}
