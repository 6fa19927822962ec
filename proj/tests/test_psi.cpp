#include <doctest.h>

#include <cmath>

#include "fsgl/error.hpp"
#include "fsgl/psi.hpp"

using namespace fsgl;

TEST_CASE("psi families evaluate on and off support") {
  const auto pp = PsiFunction::power_pole(1.0, 1.0, 2.0, 4.0);
  CHECK(pp(3.0) == doctest::Approx(1.0));
  CHECK(pp(2.5) == doctest::Approx(1.0 / (0.5 * 1.5)));
  CHECK(std::isinf(pp(2.0)));
  CHECK(std::isinf(pp(5.0)));

  const auto pw = PsiFunction::power(0.5);
  CHECK(pw(16.0) == doctest::Approx(4.0));
  CHECK(std::isinf(pw(0.5)));

  const auto dg = PsiFunction::degenerate(3.0, 2.0);
  CHECK(dg(3.0) == 2.0);
  CHECK(std::isinf(dg(3.1)));
  CHECK(dg.is_degenerate());

  const auto c = PsiFunction::constant(2.0, 1.0, 5.0);
  CHECK(c(4.0) == 2.0);
}

TEST_CASE("invalid psi arguments raise DomainError") {
  CHECK_THROWS_AS(PsiFunction::power_pole(1, 1, 0.5, 4), DomainError);
  CHECK_THROWS_AS(PsiFunction::power_pole(1, 1, 2, kInfinity), DomainError);
  CHECK_THROWS_AS(PsiFunction::power(0.5, 3, 2), DomainError);
  CHECK_THROWS_AS(PsiFunction::degenerate(0.5), DomainError);
  CHECK_THROWS_AS(PsiFunction::tabulated({1, 2}, {1, -1}), DomainError);
  CHECK_THROWS_AS(PsiFunction::tabulated({2, 1}, {1, 1}), DomainError);
}

TEST_CASE("tabulated psi interpolates log-linearly and guards its hull") {
  const auto t = PsiFunction::tabulated({2, 4}, {1, 4}, 2.0, kInfinity);
  CHECK(t(3.0) == doctest::Approx(2.0));
  CHECK(t(4.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(t(5.0), HullError);
}

TEST_CASE("fundamental function of the degenerate rule") {
  const auto dg = PsiFunction::degenerate(4.0, 2.0);
  for (double delta : {1e-6, 1e-3, 0.1, 1.0})
    CHECK(fundamental_function(dg, delta) == doctest::Approx(std::pow(delta, 0.25) / 2.0).epsilon(1e-12));
}

TEST_CASE("fundamental function of p^beta matches its closed form") {
  // sup_p delta^{1/p} p^{-beta} is attained at p = |log delta| / beta.
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto psi = PsiFunction::power(beta);
    for (double delta : {1e-12, 1e-8, 1e-5}) {
      const double L = -std::log(delta);
      const double expected = std::pow(beta / (std::exp(1.0) * L), beta);
      const auto r = fundamental_function_argmax(psi, delta);
      CHECK(r.value == doctest::Approx(expected).epsilon(1e-8));
      CHECK(r.argmax_p == doctest::Approx(L / beta).epsilon(1e-4));
    }
  }
}

TEST_CASE("constant psi attains its fundamental function at the upper end") {
  const auto c = PsiFunction::constant(3.0, 2.0, 6.0);
  CHECK(fundamental_function(c, 1e-3) == doctest::Approx(std::pow(1e-3, 1.0 / 6.0) / 3.0).epsilon(1e-6));
}

TEST_CASE("fundamental function is monotone in delta and below one for psi >= 1") {
  const auto psi = PsiFunction::power_pole(1.0, 1.0, 2.0, 4.0);
  double prev = 0.0;
  for (double delta = 1e-8; delta <= 1.0; delta *= 10.0) {
    const double v = fundamental_function(psi, delta);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("truncated fundamental function restricts the exponent range") {
  const auto psi = PsiFunction::power(1.0);
  const double delta = 1e-12;
  const double full = fundamental_function(psi, delta);
  // Unconstrained argmax is |log delta| ~ 27.6; truncating above it forces p -> q.
  const double q = 40.0;
  const double trunc = truncated_fundamental_function(psi, q, delta);
  CHECK(trunc < full);
  CHECK(trunc == doctest::Approx(std::pow(delta, 1.0 / q) / q).epsilon(1e-6));
  const auto tab = PsiFunction::tabulated({2, 8}, {1, 2});
  CHECK_THROWS_AS(truncated_fundamental_function(tab, 8.0, 0.1), DomainError);
  const auto open_tab = PsiFunction::tabulated({2, 8}, {1, 2}, 2.0, kInfinity);
  CHECK_THROWS_AS(truncated_fundamental_function(open_tab, 9.0, 0.1), HullError);
}

TEST_CASE("tail bound from a degenerate psi is Markov") {
  // psi~*(s) = r s - r log psi(r), so 2 exp(-psi~*(log z)) = 2 z^{-r} for psi(r) = 1.
  const auto dg = PsiFunction::degenerate(3.0);
  for (double z : {2.0, 5.0, 10.0})
    CHECK(tail_bound_from_psi(dg, 1.0, z) == doctest::Approx(2.0 * std::pow(z, -3.0)).epsilon(1e-9));
  CHECK(tail_bound_from_psi(dg, 1.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("natural function of a family is the pointwise maximum") {
  const auto psi = natural_function_from_family({2, 3, 4}, {{1, 5, 2}, {3, 1, 2.5}});
  CHECK(psi(2.0) == doctest::Approx(3.0));
  CHECK(psi(3.0) == doctest::Approx(5.0));
  CHECK(psi(4.0) == doctest::Approx(2.5));
}

TEST_CASE("invariant check accepts positive psi") {
  CHECK_NOTHROW(PsiFunction::power_pole(0.5, 2.0, 1.0, 10.0).check_invariants());
  CHECK_NOTHROW(PsiFunction::power(-0.5).check_invariants());
}
