#pragma once

#include <vector>

#include "spinodal/field.hpp"

namespace spinodal {

enum class GibbsForm {
  DoubleWell,  ///< G(x) = x^2 (1 - x)^2
};

/// Bulk free energy per unit area as a function of the Ti fraction x.
/// Dimensionless solver units. `coefficients` is reserved for forms other
/// than DoubleWell and is ignored by it.
struct GibbsModel {
  GibbsForm form = GibbsForm::DoubleWell;
  std::vector<double> coefficients;
};

double gibbs(const GibbsModel& model, double x);
double dgibbs(const GibbsModel& model, double x);
double d2gibbs(const GibbsModel& model, double x);

struct SpinodalInterval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

/// Maximal interval where G'' < 0. Throws NumericalError if there is none.
SpinodalInterval spinodal_interval(const GibbsModel& model);

/// Discrete free-energy functional
///
///   F = sum_cells [ G(x) + kappa |grad x|^2 ] h^2
///
/// with grad x from centered periodic differences. The kappa |grad x|^2
/// convention makes the variational derivative G'(x) - 2 kappa lap(x),
/// which is the chemical potential used by the solver.
double free_energy(const ScalarField2D& f, const GibbsModel& model, double kappa);

}  // namespace spinodal
