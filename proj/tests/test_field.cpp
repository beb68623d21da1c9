#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinodal/errors.hpp"
#include "spinodal/field.hpp"

using namespace spinodal;

TEST_CASE("gaussian_field sample mean and variance") {
  const GridSpec spec{256, 256, 1.0};
  const auto f = gaussian_field(spec, 0.48, 1e-3, 1);
  const auto s = field_stats(f);
  CHECK(std::abs(s.mean - 0.48) <= 4.0 * std::sqrt(1e-3 / 65536.0));
  CHECK(std::abs(s.variance - 1e-3) <= 0.1e-3);
}

TEST_CASE("gaussian_field with zero variance is exactly the mean") {
  const auto f = gaussian_field({16, 8, 1.0}, 0.5, 0.0, 7);
  for (double v : f.data()) CHECK(v == 0.5);
}

TEST_CASE("gaussian_field is deterministic and independent of thread count") {
  const GridSpec spec{64, 48, 1.0};
  const auto a = gaussian_field(spec, 0.48, 1e-3, 42, 1);
  const auto b = gaussian_field(spec, 0.48, 1e-3, 42, 1);
  const auto c = gaussian_field(spec, 0.48, 1e-3, 42, 5);
  CHECK(a == b);
  CHECK(a == c);
  CHECK_FALSE(a == gaussian_field(spec, 0.48, 1e-3, 43, 1));
}

TEST_CASE("grid and argument validation") {
  CHECK_THROWS_AS(gaussian_field({3, 8, 1.0}, 0.5, 1e-3, 1), DataError);
  CHECK_THROWS_AS(gaussian_field({8, 8, 0.0}, 0.5, 1e-3, 1), DataError);
  CHECK_THROWS_AS(gaussian_field({8, 8, 1.0}, 0.5, -1.0, 1), DataError);
  CHECK_THROWS_AS(gaussian_field({8, 8, 1.0}, 1.5, 1e-3, 1), DataError);
  CHECK(GridSpec{64, 32, 1.0}.power_of_two());
  CHECK_FALSE(GridSpec{48, 32, 1.0}.power_of_two());
}

TEST_CASE("laplacian of a constant is zero") {
  const ScalarField2D f({8, 12, 0.7}, 3.25);
  const auto l = laplacian_periodic(f);
  for (double v : l.data()) CHECK(v == 0.0);
}

TEST_CASE("laplacian stencil of a point source wraps periodically") {
  ScalarField2D f({6, 5, 1.0}, 0.0);
  f(0, 0) = 1.0;
  const auto l = laplacian_periodic(f);
  CHECK(l(0, 0) == -4.0);
  CHECK(l(1, 0) == 1.0);
  CHECK(l(5, 0) == 1.0);
  CHECK(l(0, 1) == 1.0);
  CHECK(l(0, 4) == 1.0);
  double sum = 0.0;
  for (double v : l.data()) sum += std::abs(v);
  CHECK(sum == 8.0);
}

TEST_CASE("cosine mode is an eigenfield of the discrete laplacian") {
  const int nx = 32;
  const double h = 0.5;
  ScalarField2D f({nx, 16, h});
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < nx; ++i) f(i, j) = std::cos(2.0 * std::numbers::pi * i / nx);
  const double lambda = -(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / nx)) / (h * h);
  const auto l = laplacian_periodic(f);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < nx; ++i) CHECK(l(i, j) == doctest::Approx(lambda * f(i, j)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("field_stats examples") {
  const auto s = field_stats(ScalarField2D({4, 4, 1.0}, 0.5));
  CHECK(s.mean == 0.5);
  CHECK(s.variance == 0.0);
  CHECK(s.min == 0.5);
  CHECK(s.max == 0.5);

  ScalarField2D f({4, 4, 1.0}, 0.0);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) f(i, j) = (i + j) % 2;
  const auto t = field_stats(f);
  CHECK(t.mean == 0.5);
  CHECK(t.variance == 0.25);
}

TEST_CASE("property: laplacian sums to zero and commutes with cyclic shifts") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const int nx = 4 + int(splitmix64(trial) % 29);
    const int ny = 4 + int(splitmix64(trial + 100) % 29);
    const double h = 0.25 + counter_uniform(trial, 7);
    ScalarField2D f({nx, ny, h});
    double max_abs = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        f(i, j) = 10.0 * (counter_uniform(trial, std::uint64_t(j * nx + i)) - 0.5);
        max_abs = std::max(max_abs, std::abs(f(i, j)));
      }
    const auto l = laplacian_periodic(f);
    double sum = 0.0;
    for (double v : l.data()) sum += v;
    CHECK(std::abs(sum) <= 1e-10 * nx * ny * max_abs / (h * h));

    const int di = int(trial % 5), dj = int(trial % 3) + 1;
    CHECK(laplacian_periodic(shift_periodic(f, di, dj)) == shift_periodic(l, di, dj));
    CHECK(laplacian_periodic(f, 3) == l);
  }
}
