#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fsgl/quadrature.hpp"

using namespace fsgl;

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 4, 8, 16}) {
    const auto& g = gauss_legendre(n);
    REQUIRE(g.x.size() == static_cast<std::size_t>(n));
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("log_add") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add(-INFINITY, 1.5) == 1.5);
  CHECK(log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}

TEST_CASE("|a + b t|^q integral agrees with tanh-sinh") {
  boost::math::quadrature::tanh_sinh<double> ts;
  struct Case {
    double a, b, w, q;
  };
  for (const Case c : {Case{1, 2, 1, 3}, Case{-1, 2, 1, 0.5}, Case{0.3, -1, 1, 2.5}, Case{1e-8, 1, 1e-3, 7.0},
                       Case{2, 0, 0.5, 1.5}, Case{1, -1e-9, 2, 4}}) {
    const double got = abs_linear_power_integral(c.a, c.b, c.w, c.q);
    double ref;
    const double root = c.b != 0 ? -c.a / c.b : -1;
    auto g = [&](double t) { return std::pow(std::abs(c.a + c.b * t), c.q); };
    if (root > 0 && root < c.w) ref = ts.integrate(g, 0.0, root) + ts.integrate(g, root, c.w);
    else ref = ts.integrate(g, 0.0, c.w);
    CHECK(got == doctest::Approx(ref).epsilon(1e-10));
  }
}
