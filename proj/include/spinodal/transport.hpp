#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spinodal {

/// CODATA 2018 exact and recommended values, SI units.
namespace constants {
inline constexpr double m_e = 9.1093837015e-31;      // kg
inline constexpr double e = 1.602176634e-19;         // C
inline constexpr double h = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double mu_0 = 1.25663706212e-6;     // H/m
inline constexpr double phi_0 = 2.067833848e-15;     // Wb, h / 2e
}  // namespace constants

/// Weak-coupling ratio Delta / (k_B T_c).
inline constexpr double kBcsGapRatio = 1.764;

struct TransportRecord {
  std::string label;
  double d = 0.0;           ///< film thickness, m
  double r_s = 0.0;         ///< sheet resistance, ohm per square
  double t_c = 0.0;         ///< K
  double hall_slope = 0.0;  ///< dR_xy / d(mu0 H), ohm per tesla

  void validate() const;
};

struct FreeElectronParams {
  double n_e;     ///< m^-3
  double k_f;     ///< m^-1
  double v_f;     ///< m/s
  double tau;     ///< s
  double l;       ///< m
  double k_f_l;   ///< dimensionless
  double rho_xx;  ///< ohm m
};

/// n_e = 1 / (slope e d). Throws DataError for a non-positive slope.
double hall_carrier_density(double hall_slope, double d);

/// Inverse of hall_carrier_density.
double hall_slope_from_density(double n_e, double d);

struct LineFit {
  double slope;
  double intercept;
  double r2;
};

/// Ordinary least squares y = slope x + intercept.
LineFit ols_line(std::span<const double> x, std::span<const double> y);

/// Hall slope from raw (mu0 H, R_xy) pairs; intercept kept as a diagnostic.
LineFit hall_slope_from_sweep(std::span<const double> mu0_h, std::span<const double> r_xy);

/// Free-electron (Drude) parameters from carrier density and sheet resistance.
FreeElectronParams free_electron_params(double n_e, double r_s, double d);

/// Delta = 1.764 k_B T_c, in joules.
double bcs_gap(double t_c);

/// L_k = hbar R_s / (pi Delta), henry per square.
double sheet_kinetic_inductance(double r_s, double t_c);

/// L_s * t, henry metre.
double specific_inductance(double l_s, double t);

/// L_s = (mu0 lambda / 2) coth(t / 2 lambda), henry per square.
double sheet_inductance_from_lambda(double lambda, double t);

struct TcOptions {
  double top_fraction = 0.10;  ///< hottest fraction used for R_normal
};

/// Temperature where R(T) crosses half the normal-state resistance, by
/// linear interpolation. R_normal is the median R over the hottest 10% of
/// samples. `trace` must be sorted by T. Throws DataError when there is no
/// crossing.
double tc_midpoint(std::span<const std::pair<double, double>> trace, const TcOptions& opts = {});

/// One row of the material-parameter table.
struct TransportReport {
  TransportRecord record;
  FreeElectronParams fe;
  double gap;
  double l_k;
  double specific_l;
};

TransportReport analyze_transport(const TransportRecord& r);

}  // namespace spinodal
