#include <doctest.h>

#include <cmath>
#include <random>

#include "fsgl/error.hpp"
#include "fsgl/fenchel.hpp"

using namespace fsgl;

TEST_CASE("conjugate of y^2/2 is x^2/2") {
  const auto s = ConvexSamples::tabulate([](double y) { return 0.5 * y * y; }, -10, 10, 20001);
  for (double x : {-3.0, -0.5, 0.0, 1.25, 4.0}) {
    CHECK(legendre_brute(s, x) == doctest::Approx(0.5 * x * x).epsilon(1e-6));
    CHECK(young_fenchel(s, x) == doctest::Approx(0.5 * x * x).epsilon(1e-6));
  }
}

TEST_CASE("conjugate of exp is x log x - x") {
  const auto s = ConvexSamples::tabulate([](double y) { return std::exp(y); }, -30, 5, 70001);
  for (double x : {0.5, 1.0, 2.0, 20.0})
    CHECK(young_fenchel(s, x) == doctest::Approx(x * std::log(x) - x).epsilon(1e-6));
}

TEST_CASE("linear-time transform agrees with brute force") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int rep = 0; rep < 5; ++rep) {
    const double a = 0.5 + std::abs(U(rng)), b = U(rng);
    const auto s = ConvexSamples::tabulate([&](double y) { return a * std::pow(std::abs(y), 1.7) + b * y; }, -5, 5, 801);
    std::vector<double> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back(-6 + 12.0 * i / 200);
    const auto fast = legendre_transform(s, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double slow = legendre_brute(s, xs[i]);
      if (std::isinf(slow)) CHECK(std::isinf(fast[i]));
      else CHECK(fast[i] == doctest::Approx(slow).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("biconjugate reproduces convex samples") {
  const auto s = ConvexSamples::tabulate([](double y) { return std::cosh(y); }, -3, 3, 301);
  const auto c = conjugate_samples(s);
  CHECK(is_convex(c));
  const auto cc = conjugate_samples(c);
  REQUIRE(cc.y.size() >= 2);
  for (std::size_t i = 0; i < cc.y.size(); ++i)
    CHECK(cc.g[i] == doctest::Approx(std::cosh(cc.y[i])).epsilon(1e-9));
}

TEST_CASE("convexity is checked and envelopes are convex") {
  const auto s = ConvexSamples::tabulate([](double y) { return std::sin(y); }, 0, 6, 61);
  CHECK_FALSE(is_convex(s));
  CHECK_THROWS_AS(check_convex(s), ConvexityError);
  const auto env = convex_envelope(s);
  CHECK(is_convex(env));
  for (std::size_t i = 0; i < env.y.size(); ++i) CHECK(env.g[i] <= std::sin(env.y[i]) + 1e-12);
}

TEST_CASE("closed sides bound the conjugate by the end value") {
  auto s = ConvexSamples::tabulate([](double y) { return y * y; }, 0, 1, 101);
  s.closed_right = true;
  // beyond the last slope 2, the sup is attained at y = 1: x - 1
  CHECK(young_fenchel(s, 5.0) == doctest::Approx(4.0));
  s.closed_right = false;
  CHECK(std::isinf(young_fenchel(s, 5.0)));
}
