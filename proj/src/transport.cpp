#include "spinodal/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinodal/errors.hpp"

namespace spinodal {

void TransportRecord::validate() const {
  if (!(d > 0.0)) throw DataError(label + ": thickness must be positive");
  if (!(r_s > 0.0)) throw DataError(label + ": sheet resistance must be positive");
  if (!(t_c >= 0.0)) throw DataError(label + ": T_c must be non-negative");
}

double hall_carrier_density(double hall_slope, double d) {
  if (!(hall_slope > 0.0))
    throw DataError("Hall slope must be positive (electron-like carriers)");
  if (!(d > 0.0)) throw DataError("thickness must be positive");
  return 1.0 / (hall_slope * constants::e * d);
}

double hall_slope_from_density(double n_e, double d) { return 1.0 / (n_e * constants::e * d); }

LineFit ols_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("x and y lengths differ");
  if (x.size() < 2) throw DataError("line fit needs at least two points");
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DataError("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}

LineFit hall_slope_from_sweep(std::span<const double> mu0_h, std::span<const double> r_xy) {
  return ols_line(mu0_h, r_xy);
}

FreeElectronParams free_electron_params(double n_e, double r_s, double d) {
  if (!(n_e > 0.0) || !(r_s > 0.0) || !(d > 0.0))
    throw DataError("free-electron inputs must be positive");
  using namespace constants;
  FreeElectronParams p;
  p.n_e = n_e;
  p.k_f = std::cbrt(3.0 * std::numbers::pi * std::numbers::pi * n_e);
  p.v_f = hbar * p.k_f / m_e;
  p.rho_xx = r_s * d;
  p.tau = m_e / (n_e * e * e * p.rho_xx);
  p.l = p.v_f * p.tau;
  p.k_f_l = p.k_f * p.l;
  return p;
}

double bcs_gap(double t_c) {
  if (!(t_c >= 0.0)) throw DataError("T_c must be non-negative");
  return kBcsGapRatio * constants::k_B * t_c;
}

double sheet_kinetic_inductance(double r_s, double t_c) {
  if (!(r_s > 0.0) || !(t_c > 0.0)) throw DataError("R_s and T_c must be positive");
  return constants::hbar * r_s / (std::numbers::pi * bcs_gap(t_c));
}

double specific_inductance(double l_s, double t) {
  if (!(l_s > 0.0) || !(t > 0.0)) throw DataError("inductance and thickness must be positive");
  return l_s * t;
}

double sheet_inductance_from_lambda(double lambda, double t) {
  if (!(lambda > 0.0) || !(t > 0.0))
    throw DataError("penetration depth and thickness must be positive");
  return 0.5 * constants::mu_0 * lambda / std::tanh(t / (2.0 * lambda));
}

double tc_midpoint(std::span<const std::pair<double, double>> trace, const TcOptions& opts) {
  if (trace.size() < 3) throw DataError("R(T) trace needs at least three points");
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].first < trace[i - 1].first) throw DataError("R(T) trace must be sorted by T");

  const std::size_t top = std::max<std::size_t>(1, std::size_t(std::ceil(opts.top_fraction * double(trace.size()))));
  std::vector<double> hot;
  for (std::size_t i = trace.size() - top; i < trace.size(); ++i) hot.push_back(trace[i].second);
  std::sort(hot.begin(), hot.end());
  const double r_n = hot.size() % 2 ? hot[hot.size() / 2]
                                    : 0.5 * (hot[hot.size() / 2 - 1] + hot[hot.size() / 2]);
  const double half = 0.5 * r_n;

  // Highest-temperature crossing, scanning down from the normal state.
  for (std::size_t i = trace.size() - 1; i > 0; --i) {
    const auto [t_hi, r_hi] = trace[i];
    const auto [t_lo, r_lo] = trace[i - 1];
    if (r_hi >= half && r_lo < half) {
      if (r_hi == r_lo) return t_hi;
      return t_lo + (half - r_lo) * (t_hi - t_lo) / (r_hi - r_lo);
    }
  }
  throw DataError("no superconducting transition: R never crosses R_normal / 2");
}

TransportReport analyze_transport(const TransportRecord& r) {
  r.validate();
  TransportReport rep;
  rep.record = r;
  rep.fe = free_electron_params(hall_carrier_density(r.hall_slope, r.d), r.r_s, r.d);
  rep.gap = bcs_gap(r.t_c);
  rep.l_k = sheet_kinetic_inductance(r.r_s, r.t_c);
  rep.specific_l = specific_inductance(rep.l_k, r.d);
  return rep;
}

}  // namespace spinodal
