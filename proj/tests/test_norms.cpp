#include <doctest.h>

#include <cmath>

#include "fsgl/error.hpp"
#include "fsgl/norms.hpp"

using namespace fsgl;

namespace {

GridFunction grid1(const std::function<double(double)>& f, int n) {
  return sample_function([&](std::span<const double> x) { return f(x[0]); }, 1, n);
}

}  // namespace

TEST_CASE("lp norm of x converges to (p+1)^{-1/p}") {
  const auto f = grid1([](double x) { return x; }, 4097);
  for (double p : {1.0, 2.0, 4.5})
    CHECK(lp_norm(f, p) == doctest::Approx(std::pow(1.0 / (p + 1), 1.0 / p)).epsilon(1e-6));
}

TEST_CASE("Gagliardo seminorm of x has the closed form") {
  // integral of |x-y|^{p(1-alpha)-1} over the square is 2/(g(g+1)), g = p(1-alpha)
  const auto f = grid1([](double x) { return x; }, 65);
  for (auto [alpha, p] : {std::pair{0.5, 4.0}, {0.3, 8.0}, {0.8, 16.0}}) {
    const double g = p * (1 - alpha);
    const double exact = std::pow(2.0 / (g * (g + 1)), 1.0 / p);
    const auto r = gagliardo_seminorm_1d(f, alpha, p);
    CHECK(r.status == SeminormStatus::ok);
    CHECK(r.value == doctest::Approx(exact).epsilon(2e-3));
    SeminormConfig fine;
    fine.panels_per_shell = 4;
    CHECK(gagliardo_seminorm_1d(f, alpha, p, fine).value == doctest::Approx(exact).epsilon(1e-5));
  }
  CHECK(gagliardo_seminorm_1d(f, 0.5, 4.0).value == doctest::Approx(std::pow(1.0 / 3, 0.25)).epsilon(1e-4));
}

TEST_CASE("Gagliardo seminorm of x^2, callable and grid") {
  // alpha = 0.6, p = 2: 2/3.8 * integral of (2-t)^2 t^{-0.2} dt
  const double exact = std::sqrt(2.0 / 3.8 * (4.0 / 0.8 - 4.0 / 1.8 + 1.0 / 2.8));
  const auto sq = [](double x) { return x * x; };
  CHECK(gagliardo_seminorm_1d(sq, 0.6, 2.0).value == doctest::Approx(exact).epsilon(1e-5));
  CHECK(gagliardo_seminorm_1d(grid1(sq, 1025), 0.6, 2.0).value == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("seminorm is homogeneous and vanishes on constants") {
  const auto f = grid1([](double x) { return std::sin(3 * x); }, 257);
  const double a = gagliardo_seminorm_1d(f, 0.4, 5.0).value;
  CHECK(gagliardo_seminorm_1d(f.scaled(-2.5), 0.4, 5.0).value == doctest::Approx(2.5 * a).epsilon(1e-12));
  const auto c = grid1([](double) { return 1.7; }, 33);
  CHECK(gagliardo_seminorm_1d(c, 0.4, 5.0).value == 0.0);
}

TEST_CASE("a cusp with too little smoothness is reported divergent") {
  const auto cusp = [](double x) { return std::pow(x, 0.2); };
  const auto r = gagliardo_seminorm_1d(cusp, 0.5, 4.0);
  CHECK(r.status == SeminormStatus::divergent);
  CHECK(std::isinf(r.value));
  // alpha = 1 leaves |x - y|^{-1}, which is not integrable
  CHECK(gagliardo_seminorm_1d([](double x) { return x; }, 1.0, 4.0).status == SeminormStatus::divergent);
}

TEST_CASE("product functions factor under the product kernel") {
  const auto g1 = [](double x) { return x * x; };
  const auto g2 = [](double x) { return std::sin(2 * x); };
  const int n = 33;
  const auto f = sample_function([&](std::span<const double> x) { return g1(x[0]) * g2(x[1]); }, 2, n);
  const FractionalIndex alpha({0.4, 0.6});
  const double p = 4.0;
  const double w1 = gagliardo_seminorm_1d(grid1(g1, n), 0.4, p).value;
  const double w2 = gagliardo_seminorm_1d(grid1(g2, n), 0.6, p).value;
  const auto r = gagliardo_seminorm_nd(f, alpha, p);
  CHECK(r.status == SeminormStatus::ok);
  CHECK(r.value == doctest::Approx(w1 * w2).epsilon(1e-4));
}

TEST_CASE("Grand Lebesgue norm with a degenerate psi is the Lp norm") {
  const auto f = grid1([](double x) { return std::exp(x) - 2; }, 513);
  for (double r : {2.0, 3.0})
    CHECK(grand_lebesgue_norm(f, PsiFunction::degenerate(r)).value == doctest::Approx(lp_norm(f, r)).epsilon(1e-12));
}

TEST_CASE("Grand Lebesgue norm of a bounded function under p^beta") {
  // |f|_p <= sup |f| = 1 with |f|_p -> 1, so sup_p |f|_p / p^{1/2} is attained at small p.
  const auto f = grid1([](double x) { return x; }, 1025);
  const auto r = grand_lebesgue_norm(f, PsiFunction::power(0.5));
  CHECK(r.value > lp_norm(f, 2.0) / std::sqrt(2.0));
  CHECK(r.value <= 1.0);
  CHECK_FALSE(r.divergent_at_upper);
}

TEST_CASE("psi_alpha coefficient and its factored bound") {
  const FractionalIndex a1 = FractionalIndex::uniform(0.5, 1);
  const double p = 4.0;
  CHECK(psi_alpha_coefficient(a1, p) == doctest::Approx(8 * std::pow(4, 0.25) * 0.75 / 0.25));
  const FractionalIndex a2({0.4, 0.7, 0.4});
  CHECK(a2.alpha0() == 0.4);
  CHECK(a2.multiplicity() == 2);
  for (double q : {3.0, 5.0, 20.0}) {
    const auto b = multidim_coefficient_bound(a2, q);
    CHECK(b.factored >= b.exact * (1 - 1e-12));
  }
}

TEST_CASE("natural zeta") {
  const FractionalIndex alpha = FractionalIndex::uniform(0.5, 1);
  const std::vector<double> grid = {3, 4, 8};
  const auto z = zeta_natural(grid1([](double x) { return x; }, 65), alpha, grid);
  REQUIRE(z.psi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i] * 0.5;
    CHECK(z.value[i] == doctest::Approx(std::pow(2.0 / (g * (g + 1)), 1.0 / grid[i])).epsilon(1e-4));
  }
  CHECK(std::isinf(z.psi->upper()));
  const auto zc = zeta_natural(grid1([](double) { return 2.0; }, 17), alpha, grid);
  CHECK(zc.degenerate);
  const auto dg = default_p_grid(alpha);
  CHECK(dg.front() > 2.0);
  CHECK(dg.size() == 64);
}
