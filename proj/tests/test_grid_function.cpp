#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fsgl/error.hpp"
#include "fsgl/grid_function.hpp"

using namespace fsgl;

namespace {

GridFunction random_grid(int d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> Z;
  std::size_t count = 1;
  for (int k = 0; k < d; ++k) count *= n;
  std::vector<double> v(count);
  for (auto& x : v) x = Z(rng);
  return GridFunction(d, n, v);
}

double brute_modulus_1d(const GridFunction& f, double delta) {
  const int k = lattice_gap(delta, f.spacing(), f.size());
  double m = 0.0;
  for (int i = 0; i < f.size(); ++i)
    for (int j = i; j < f.size() && j - i <= k; ++j) m = std::max(m, std::abs(f[i] - f[j]));
  return m;
}

}  // namespace

TEST_CASE("lattice layout is row-major") {
  GridFunction f(2, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  const int idx[2] = {1, 2};
  CHECK(f.flat_index(idx) == 5);
  CHECK(f.at(idx) == 5.0);
  CHECK(f.spacing() == doctest::Approx(0.5));
  CHECK_THROWS(GridFunction(2, 3, {1, 2, 3}));
}

TEST_CASE("sample_function rejects non-finite values") {
  const auto g = sample_function([](std::span<const double> x) { return x[0] * x[1]; }, 2, 5);
  const int idx[2] = {4, 2};
  CHECK(g.at(idx) == doctest::Approx(0.5));
  CHECK_THROWS_AS(sample_function([](std::span<const double> x) { return 1.0 / x[0]; }, 1, 5), DomainError);
}

TEST_CASE("1-D modulus matches a brute-force sweep") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto f = random_grid(1, 257, seed);
    for (double delta : {0.0, 1.0 / 256, 0.01, 0.1, 0.5, 1.0})
      CHECK(modulus_of_continuity(f, delta) == brute_modulus_1d(f, delta));
  }
}

TEST_CASE("2-D modulus of a linear function") {
  const auto f = sample_function([](std::span<const double> x) { return 3 * x[0] + 4 * x[1]; }, 2, 17);
  // best lattice step within radius 1/4 at h = 1/16 is (2, 3) h
  CHECK(modulus_of_continuity(f, 0.25) == doctest::Approx(1.125).epsilon(1e-12));
}

TEST_CASE("rectangle table agrees with direct rectangle modulus") {
  const auto f = random_grid(2, 12, 11);
  const RectangleModulusTable table(f);
  const double h = f.spacing();
  for (int a = 0; a < 12; a += 3)
    for (int b = 0; b < 12; b += 2) {
      const std::vector<double> delta = {a * h, b * h};
      double brute = 0.0;
      for (int x0 = 0; x0 < 12; ++x0)
        for (int x1 = 0; x1 < 12; ++x1)
          for (int y0 = x0; y0 < 12 && y0 - x0 <= a; ++y0)
            for (int y1 = x1; y1 < 12 && y1 - x1 <= b; ++y1) {
              const int x[2] = {x0, x1}, y[2] = {y0, y1};
              brute = std::max(brute, std::abs(rectangle_difference(f, x, y)));
            }
      CHECK(table(delta) == doctest::Approx(brute).epsilon(1e-14));
      CHECK(rectangle_modulus(f, delta) == doctest::Approx(brute).epsilon(1e-14));
    }
}

TEST_CASE("box difference vanishes on additive functions") {
  const auto f = sample_function([](std::span<const double> x) { return std::sin(5 * x[0]) + x[1] * x[1]; }, 2, 9);
  const int x[2] = {1, 2}, y[2] = {7, 5};
  CHECK(std::abs(rectangle_difference(f, x, y)) < 1e-14);
  const auto g = sample_function([](std::span<const double> x) { return x[0] * x[1]; }, 2, 9);
  CHECK(rectangle_difference(g, x, y) == doctest::Approx(0.75 * 0.375));
}

TEST_CASE("distance properties: symmetry holds, triangle inequality does not") {
  const auto f = sample_function([](std::span<const double> x) { return x[0] * x[1]; }, 2, 5);
  const auto r = rectangle_distance_exhaustive(f);
  CHECK(r.violated_a == 0);
  CHECK(r.violated_b == 0);
  CHECK(r.violated_c > 0);
  const auto rr = rectangle_distance_check(f, 20000, 3);
  CHECK(rr.violated_a == 0);
  CHECK(rr.violated_b == 0);
  CHECK(rr.trials >= 20000);
}

TEST_CASE("grid CSV round trip is exact") {
  const auto f = random_grid(2, 7, 5);
  const auto g = read_grid_csv(write_grid_csv(f));
  CHECK(g.dim() == 2);
  CHECK(g.size() == 7);
  CHECK(g.values() == f.values());
  CHECK_THROWS(read_grid_csv("not,a\ngrid\n"));
}

TEST_CASE("tapered extension and dilation") {
  auto f = [](double x) { return x * x; };
  CHECK(tapered_extension(f, 0.5) == doctest::Approx(0.25));
  CHECK(tapered_extension(f, 1.5) == doctest::Approx(0.5));
  CHECK(tapered_extension(f, 3.0) == 0.0);
  const auto g = dilate(f, 0.5, 9, 4.0);
  CHECK(g.extent() == doctest::Approx(4.0));
  CHECK(g[2] == doctest::Approx(0.25));  // x = 1, lambda x = 0.5
}
