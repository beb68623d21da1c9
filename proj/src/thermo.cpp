#include "spinodal/thermo.hpp"

#include <cmath>

#include "spinodal/errors.hpp"

namespace spinodal {

double gibbs(const GibbsModel& model, double x) {
  switch (model.form) {
    case GibbsForm::DoubleWell: {
      const double y = x * (1.0 - x);
      return y * y;
    }
  }
  return 0.0;
}

double dgibbs(const GibbsModel& model, double x) {
  switch (model.form) {
    case GibbsForm::DoubleWell:
      return 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);  // 4x^3 - 6x^2 + 2x
  }
  return 0.0;
}

double d2gibbs(const GibbsModel& model, double x) {
  switch (model.form) {
    case GibbsForm::DoubleWell:
      return 12.0 * x * x - 12.0 * x + 2.0;
  }
  return 0.0;
}

SpinodalInterval spinodal_interval(const GibbsModel& model) {
  switch (model.form) {
    case GibbsForm::DoubleWell: {
      // Roots of 12x^2 - 12x + 2 = 0.
      const double a = 12.0, b = -12.0, c = 2.0;
      const double disc = b * b - 4.0 * a * c;
      if (disc <= 0.0) break;
      const double q = -0.5 * (b - std::sqrt(disc));  // b < 0, avoids cancellation
      const double r1 = q / a, r2 = c / q;
      return {std::min(r1, r2), std::max(r1, r2)};
    }
  }
  throw NumericalError("no spinodal region: G'' is non-negative everywhere");
}

double free_energy(const ScalarField2D& f, const GibbsModel& model, double kappa) {
  const int nx = f.nx(), ny = f.ny();
  const double h = f.h();
  const double inv_2h = 0.5 / h;
  double bulk = 0.0;
  double grad = 0.0;
  for (int j = 0; j < ny; ++j) {
    const int jp = j == ny - 1 ? 0 : j + 1;
    const int jm = j == 0 ? ny - 1 : j - 1;
    for (int i = 0; i < nx; ++i) {
      const int ip = i == nx - 1 ? 0 : i + 1;
      const int im = i == 0 ? nx - 1 : i - 1;
      const double gx = (f(ip, j) - f(im, j)) * inv_2h;
      const double gy = (f(i, jp) - f(i, jm)) * inv_2h;
      bulk += gibbs(model, f(i, j));
      grad += gx * gx + gy * gy;
    }
  }
  return (bulk + kappa * grad) * h * h;
}

}  // namespace spinodal
