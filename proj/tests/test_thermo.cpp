#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinodal/errors.hpp"
#include "spinodal/thermo.hpp"

using namespace spinodal;

TEST_CASE("double-well values") {
  const GibbsModel g;
  CHECK(gibbs(g, 0.0) == 0.0);
  CHECK(gibbs(g, 1.0) == 0.0);
  CHECK(gibbs(g, 0.5) == 0.0625);
  for (double x = -0.3; x <= 1.3; x += 0.05) CHECK(gibbs(g, x) == doctest::Approx(gibbs(g, 1.0 - x)).epsilon(1e-14));
}

TEST_CASE("double-well derivatives") {
  const GibbsModel g;
  CHECK(dgibbs(g, 0.5) == 0.0);
  CHECK(d2gibbs(g, 0.5) == -1.0);
  CHECK(d2gibbs(g, 0.0) == 2.0);
  CHECK(d2gibbs(g, 1.0) == 2.0);
  for (double x = -0.2; x <= 1.2; x += 0.1) {
    CHECK(dgibbs(g, x) == doctest::Approx(4 * x * x * x - 6 * x * x + 2 * x).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("dgibbs matches centered differences of gibbs to O(delta^2)") {
  const GibbsModel g;
  for (double delta : {1e-3, 1e-4}) {
    for (double x = -0.2; x <= 1.2 + 1e-12; x += 0.01) {
      const double fd = (gibbs(g, x + delta) - gibbs(g, x - delta)) / (2 * delta);
      // Truncation error is G'''(x) delta^2 / 6 with |G'''| <= 24 |x - 0.5| <= 16.8.
      CHECK(std::abs(dgibbs(g, x) - fd) <= 3.0 * delta * delta + 1e-11);
      const double fd2 = (dgibbs(g, x + delta) - dgibbs(g, x - delta)) / (2 * delta);
      CHECK(std::abs(d2gibbs(g, x) - fd2) <= 4.0 * delta * delta + 1e-10);
    }
  }
}

TEST_CASE("spinodal interval of the double well") {
  const GibbsModel g;
  const auto s = spinodal_interval(g);
  CHECK(std::abs(s.lo - (3.0 - std::sqrt(3.0)) / 6.0) <= 1e-12);
  CHECK(std::abs(s.hi - (3.0 + std::sqrt(3.0)) / 6.0) <= 1e-12);
  CHECK(std::abs(d2gibbs(g, s.lo)) <= 1e-10);
  CHECK(std::abs(d2gibbs(g, s.hi)) <= 1e-10);
  CHECK(std::abs((s.lo + s.hi) - 1.0) <= 1e-15);
  CHECK(s.contains(0.48));
  for (int k = 1; k < 100; ++k) CHECK(d2gibbs(g, s.lo + (s.hi - s.lo) * k / 100.0) < 0.0);
  CHECK(d2gibbs(g, s.lo - 1e-6) > 0.0);
  CHECK(d2gibbs(g, s.hi + 1e-6) > 0.0);
}

TEST_CASE("free energy of uniform fields") {
  const GibbsModel g;
  CHECK(free_energy(ScalarField2D({16, 8, 1.0}, 0.0), g, 1.0) == 0.0);
  CHECK(free_energy(ScalarField2D({16, 8, 1.0}, 0.5), g, 1.0) == doctest::Approx(16.0 * 8.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("gradient term of a small sinusoid") {
  const GibbsModel g;
  const int nx = 32, ny = 8;
  const double eps = 1e-3, kappa = 1.7;
  ScalarField2D f({nx, ny, 1.0});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) f(i, j) = 0.5 + eps * std::cos(2 * std::numbers::pi * i / nx);
  double bulk = 0.0;
  for (double x : f.data()) bulk += gibbs(g, x);
  // Centered difference of cos(q i) is -sin(q) sin(q i); its mean square is sin^2(q)/2.
  const double kd = std::sin(2 * std::numbers::pi / nx);
  const double expected = kappa * eps * eps * (nx * ny / 2.0) * kd * kd;
  CHECK(free_energy(f, g, kappa) - bulk == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("free energy is invariant under x -> 1 - x") {
  const GibbsModel g;
  const auto f = gaussian_field({32, 32, 1.0}, 0.4, 0.02, 3);
  ScalarField2D m = f;
  m.values() = 1.0 - f.values();
  CHECK(free_energy(f, g, 1.0) == doctest::Approx(free_energy(m, g, 1.0)).epsilon(1e-12));
}
