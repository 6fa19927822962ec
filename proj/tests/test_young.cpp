#include <doctest.h>

#include <cmath>

#include "fsgl/error.hpp"
#include "fsgl/young.hpp"

using namespace fsgl;

TEST_CASE("power and exponential Young functions invert") {
  const auto p3 = YoungFunction::power(3.0);
  CHECK(p3(-2.0) == doctest::Approx(8.0));
  CHECK(p3.inverse(27.0) == doctest::Approx(3.0).epsilon(1e-9));
  for (double m : {1.0, 2.0, 4.0}) {
    const auto e = YoungFunction::exponential(m);
    for (double y : {0.1, 1.0, 100.0}) {
      const double u = std::pow(m * std::log1p(y), 1.0 / m);
      CHECK(e.inverse(y) == doctest::Approx(u).epsilon(1e-9));
      CHECK(e(e.inverse(y)) == doctest::Approx(y).epsilon(1e-8));
    }
    CHECK(e.is_exponential_type());
    CHECK(e.log_representative(3.0) == doctest::Approx(std::pow(3.0, m) / m));
  }
  CHECK_THROWS_AS(p3.log_representative(2.0), DomainError);
}

TEST_CASE("orlicz fundamental function of |u|^q is delta^{1 - 1/q}") {
  const auto phi = YoungFunction::power(4.0);
  for (double delta : {1e-6, 1e-2, 0.5, 1.0})
    CHECK(orlicz_fundamental(phi, delta) == doctest::Approx(std::pow(delta, 0.75)).epsilon(1e-9));
}

TEST_CASE("exp_of_mu is continuous at the patch radius") {
  std::vector<double> u, mu;
  for (int i = 0; i <= 100; ++i) {
    u.push_back(std::exp(-3.0 + 0.1 * i));
    mu.push_back(u.back() * u.back() / 2.0);
  }
  const auto N = YoungFunction::exp_of_mu(u, mu, 3.0);
  CHECK(N(3.0 - 1e-9) == doctest::Approx(N(3.0 + 1e-9)).epsilon(1e-6));
  // mu is interpolated linearly in log u between nodes 0.1 apart
  CHECK(N(5.0) == doctest::Approx(std::exp(12.5)).epsilon(0.03));
  CHECK(N.patch_coefficient() == doctest::Approx(std::exp(4.5) / 9.0).epsilon(0.01));
}

TEST_CASE("psi(p) = p^{1/m} round trips through its Orlicz function") {
  for (double m : {1.0, 2.0}) {
    const auto psi = PsiFunction::power(1.0 / m, 1.0);
    const auto N = orlicz_from_psi(psi);
    auto cfg = default_orlicz_psi_config();
    cfg.p_grid = {2, 4, 8, 16, 32};
    const auto back = psi_from_orlicz(N, cfg);
    for (double p : cfg.p_grid) {
      const double r = back(p) / psi(p);
      CHECK(r <= 1.0 + 1e-6);
      CHECK(r >= 0.95);
    }
  }
}

TEST_CASE("N_m maps to psi equivalent to p^{1/m}") {
  for (double m : {1.0, 2.0, 4.0}) {
    const auto N = YoungFunction::exponential(m);
    auto cfg = default_orlicz_psi_config();
    cfg.p_grid = {2, 5, 10, 20, 50, 100};
    const auto psi = psi_from_orlicz(N, cfg);
    for (double p : cfg.p_grid) {
      const double r = psi(p) / std::pow(p, 1.0 / m);
      CHECK(r >= 0.25);
      CHECK(r <= 4.0);
    }
  }
}

TEST_CASE("orlicz_from_psi needs an unbounded support") {
  CHECK_THROWS_AS(orlicz_from_psi(PsiFunction::power(1.0, 1.0, 10.0)), DomainError);
}
