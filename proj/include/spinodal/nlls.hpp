#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace spinodal {

enum class Bound {
  None,      ///< p = offset + scale * u
  Positive,  ///< p = offset * exp(u), offset > 0
  Interval,  ///< p = lo + (hi - lo) / (1 + exp(-u))
};

struct ParamSpec {
  std::string name;
  std::string unit;
  Bound bound = Bound::None;
  double lo = 0.0;
  double hi = 0.0;
  double scale = 1.0;  ///< internal unit for Bound::None
  bool fixed = false;
};

/// Model value at abscissa x for parameters p. Real models return a
/// complex number with zero imaginary part.
using ModelFn = std::function<std::complex<double>(std::span<const double> p, double x)>;

/// d model / d p_k written into grad (size = number of parameters).
using GradientFn =
    std::function<void(std::span<const double> p, double x, std::span<std::complex<double>> grad)>;

struct FitModel {
  std::string name;
  std::vector<ParamSpec> params;
  bool complex_valued = false;
  ModelFn eval;
  GradientFn gradient;  ///< optional analytic Jacobian

  std::size_t size() const { return params.size(); }
};

struct DataPoint {
  double x;
  std::complex<double> y;
  double weight = 1.0;
};

struct FitOptions {
  int max_iter = 200;
  double rel_reduction = 1e-10;
  double step_tol = 1e-12;
  double lambda0 = 1e-3;
  double nu = 10.0;
  bool analytic_jacobian = false;
  double fd_step = 1e-6;
};

struct FitResult {
  std::vector<double> params;
  Eigen::MatrixXd covariance;
  std::vector<double> std_errors;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  double r2 = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
  std::vector<double> cost_history;  ///< weighted SS after each accepted step
};

/// Levenberg-Marquardt on the stacked weighted residuals
/// sqrt(w) (y - model). Complex observations contribute their real and
/// imaginary parts as separate residuals. Throws NumericalError when the
/// normal equations are singular at the starting point.
FitResult nlls_fit(const FitModel& model, std::span<const DataPoint> data,
                   std::span<const double> init, const FitOptions& opts = {});

/// Stacked residual vector sqrt(w) (y - model(p)).
Eigen::VectorXd residuals(const FitModel& model, std::span<const DataPoint> data,
                          std::span<const double> p);

/// d residual / d p by central differences with relative step `step`.
Eigen::MatrixXd numeric_jacobian(const FitModel& model, std::span<const DataPoint> data,
                                 std::span<const double> p, double step = 1e-6);

/// d residual / d p from the model's analytic gradient. Requires model.gradient.
Eigen::MatrixXd analytic_jacobian(const FitModel& model, std::span<const DataPoint> data,
                                  std::span<const double> p);

/// 1 - SS_res / SS_tot with weights; 1 when both vanish.
double r_squared(const FitModel& model, std::span<const DataPoint> data,
                 std::span<const double> p);

}  // namespace spinodal
