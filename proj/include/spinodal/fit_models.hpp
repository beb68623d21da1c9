#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spinodal/nlls.hpp"
#include "spinodal/transport.hpp"

namespace spinodal {

/// Ginzburg-Landau parallel upper critical field in tesla:
/// mu0 Hc2(T) = phi0 / (2 pi xi^2) [1 - (T/Tc)^2]. Zero for T >= Tc.
double model_gl_hc2(double t, double xi, double t_c);

/// Empirical power law mu0 Hc2(T) = H0 [1 - (T/Tc)^alpha]^beta. Zero for T >= Tc.
double model_powerlaw_hc2(double t, double h0, double alpha, double beta, double t_c);

/// Inverse transmission of a notch-coupled resonator:
/// 1 + (Qi / Qc*) e^{i phi} / (1 + 2 i Qi (f - f0) / f0).
std::complex<double> model_inv_s21(double f, double q_i, double q_c, double phi, double f0);

/// Internal Q from loaded and coupling Q: (1/Q - 1/Qc)^-1.
double internal_q(double q_loaded, double q_c);

/// Parameters: xi [m], Tc [K].
FitModel gl_hc2_model(bool fix_tc = false);
/// Parameters: H0 [T], alpha, beta, Tc [K]. alpha and beta bounded to (0, 10).
FitModel powerlaw_hc2_model(bool fix_tc = false);
/// Parameters: Qi, Qc*, phi [rad], f0 [Hz]. `linewidth` sets the internal
/// unit of f0 and should be close to f0 / Qi.
FitModel inv_s21_model(double linewidth);
/// Parameters: slope, intercept.
FitModel line_model();

/// Counts points with T > Tc, where the critical-field models are clamped.
std::size_t points_above_tc(std::span<const DataPoint> data, double t_c);

/// (xi, Tc) from a line fit of Hc2 against T^2.
std::vector<double> guess_gl_hc2(std::span<const DataPoint> data);
/// (H0, alpha, beta, Tc) seeded from the GL guess.
std::vector<double> guess_powerlaw_hc2(std::span<const DataPoint> data);
/// (Qi, Qc*, phi, f0) from the resonance peak of |1/S21 - 1| and its
/// half-power width. `data` holds 1/S21.
std::vector<double> guess_inv_s21(std::span<const DataPoint> inv_s21);

/// Converts (f, S21) samples into (f, 1/S21) fit points.
std::vector<DataPoint> invert_s21(std::span<const DataPoint> s21);

struct Hc2Fit {
  FitModel model;
  FitResult result;
  std::size_t clamped_points;
};

/// GL fit; when `t_c` is given it is held fixed.
Hc2Fit fit_gl_hc2(std::span<const DataPoint> data, std::optional<double> t_c = {},
                  const FitOptions& opts = {});
Hc2Fit fit_powerlaw_hc2(std::span<const DataPoint> data, std::optional<double> t_c = {},
                        const FitOptions& opts = {});

struct ResonanceFit {
  FitModel model;
  FitResult result;
};

/// Fits 1/S21 given raw S21 samples.
ResonanceFit fit_resonance(std::span<const DataPoint> s21, const FitOptions& opts = {});

struct RegimeWindows {
  std::pair<double, double> high_t{100.0, 300.0};
  std::pair<double, double> low_t{10.0, 60.0};
};

struct ConductivityRegimes {
  LineFit high_t;  ///< sigma against T
  LineFit low_t;   ///< sigma against sqrt(T)
  std::size_t high_points;
  std::size_t low_points;
};

/// Line fits of sigma(T) in the two windows (inclusive). Throws DataError
/// when a window holds fewer than three points.
ConductivityRegimes fit_conductivity_regimes(std::span<const std::pair<double, double>> trace,
                                             const RegimeWindows& windows = {});

}  // namespace spinodal
