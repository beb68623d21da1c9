#include "spinodal/fit_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinodal/errors.hpp"

namespace spinodal {

using cd = std::complex<double>;

double model_gl_hc2(double t, double xi, double t_c) {
  if (t >= t_c) return 0.0;
  const double r = t / t_c;
  return constants::phi_0 / (2.0 * std::numbers::pi * xi * xi) * (1.0 - r * r);
}

double model_powerlaw_hc2(double t, double h0, double alpha, double beta, double t_c) {
  if (t >= t_c) return 0.0;
  const double q = 1.0 - std::pow(std::max(t, 0.0) / t_c, alpha);
  return h0 * std::pow(q, beta);
}

cd model_inv_s21(double f, double q_i, double q_c, double phi, double f0) {
  const cd den(1.0, 2.0 * q_i * (f - f0) / f0);
  return 1.0 + (q_i / q_c) * std::polar(1.0, phi) / den;
}

double internal_q(double q_loaded, double q_c) { return 1.0 / (1.0 / q_loaded - 1.0 / q_c); }

FitModel gl_hc2_model(bool fix_tc) {
  FitModel m;
  m.name = "gl_hc2";
  m.params = {{"xi_GL", "m", Bound::Positive}, {"Tc", "K", Bound::Positive}};
  m.params[1].fixed = fix_tc;
  m.eval = [](std::span<const double> p, double t) { return cd(model_gl_hc2(t, p[0], p[1])); };
  m.gradient = [](std::span<const double> p, double t, std::span<cd> g) {
    const double xi = p[0], tc = p[1];
    if (t >= tc) {
      g[0] = g[1] = 0.0;
      return;
    }
    const double pref = constants::phi_0 / (2.0 * std::numbers::pi * xi * xi);
    g[0] = -2.0 * model_gl_hc2(t, xi, tc) / xi;
    g[1] = pref * 2.0 * t * t / (tc * tc * tc);
  };
  return m;
}

FitModel powerlaw_hc2_model(bool fix_tc) {
  FitModel m;
  m.name = "powerlaw_hc2";
  m.params = {{"H0", "T", Bound::Positive},
              {"alpha", "", Bound::Interval, 0.0, 10.0},
              {"beta", "", Bound::Interval, 0.0, 10.0},
              {"Tc", "K", Bound::Positive}};
  m.params[3].fixed = fix_tc;
  m.eval = [](std::span<const double> p, double t) {
    return cd(model_powerlaw_hc2(t, p[0], p[1], p[2], p[3]));
  };
  m.gradient = [](std::span<const double> p, double t, std::span<cd> g) {
    const double h0 = p[0], a = p[1], b = p[2], tc = p[3];
    if (t >= tc) {
      std::fill(g.begin(), g.end(), cd(0.0));
      return;
    }
    const double r = std::max(t, 0.0) / tc;
    const double ra = std::pow(r, a);
    const double q = 1.0 - ra;
    const double qb = std::pow(q, b);
    const double qb1 = std::pow(q, b - 1.0);
    const double ra_log = r > 0.0 ? ra * std::log(r) : 0.0;
    g[0] = qb;
    g[1] = -h0 * b * qb1 * ra_log;
    g[2] = h0 * qb * std::log(q);
    g[3] = h0 * b * qb1 * a * ra / tc;
  };
  return m;
}

FitModel inv_s21_model(double linewidth) {
  FitModel m;
  m.name = "inv_s21";
  m.complex_valued = true;
  m.params = {{"Qi", "", Bound::Positive},
              {"Qc*", "", Bound::Positive},
              {"phi", "rad", Bound::None, 0.0, 0.0, 1.0},
              {"f0", "Hz", Bound::None, 0.0, 0.0, linewidth > 0.0 ? linewidth : 1.0}};
  m.eval = [](std::span<const double> p, double f) {
    return model_inv_s21(f, p[0], p[1], p[2], p[3]);
  };
  m.gradient = [](std::span<const double> p, double f, std::span<cd> g) {
    const double qi = p[0], qc = p[1], phi = p[2], f0 = p[3];
    const cd a = std::polar(1.0, phi) / qc;
    const cd den(1.0, 2.0 * qi * (f - f0) / f0);
    const cd s1 = qi * a / den;
    g[0] = a / (den * den);
    g[1] = -s1 / qc;
    g[2] = cd(0.0, 1.0) * s1;
    g[3] = qi * a * cd(0.0, 2.0) * qi * f / (f0 * f0 * den * den);
  };
  return m;
}

FitModel line_model() {
  FitModel m;
  m.name = "line";
  m.params = {{"slope", "", Bound::None}, {"intercept", "", Bound::None}};
  m.eval = [](std::span<const double> p, double x) { return cd(p[0] * x + p[1]); };
  m.gradient = [](std::span<const double>, double x, std::span<cd> g) {
    g[0] = x;
    g[1] = 1.0;
  };
  return m;
}

std::size_t points_above_tc(std::span<const DataPoint> data, double t_c) {
  return std::size_t(std::count_if(data.begin(), data.end(),
                                   [&](const DataPoint& d) { return d.x > t_c; }));
}

std::vector<double> guess_gl_hc2(std::span<const DataPoint> data) {
  std::vector<double> t2, h;
  for (const auto& d : data)
    if (d.y.real() > 0.0) {
      t2.push_back(d.x * d.x);
      h.push_back(d.y.real());
    }
  if (h.size() < 2) throw DataError("critical-field data needs at least two positive fields");
  const LineFit lf = ols_line(t2, h);
  double a = lf.intercept, b = -lf.slope;
  const double t_max = std::sqrt(*std::max_element(t2.begin(), t2.end()));
  if (!(a > 0.0) || !(b > 0.0)) {
    a = *std::max_element(h.begin(), h.end());
    b = a / (1.1 * 1.1 * t_max * t_max);
  }
  const double t_c = std::sqrt(a / b);
  const double xi = std::sqrt(constants::phi_0 / (2.0 * std::numbers::pi * a));
  return {xi, std::max(t_c, t_max * 1.001)};
}

std::vector<double> guess_powerlaw_hc2(std::span<const DataPoint> data) {
  const auto gl = guess_gl_hc2(data);
  double h_max = 0.0;
  for (const auto& d : data) h_max = std::max(h_max, d.y.real());
  return {1.05 * h_max, 2.0, 1.0, gl[1]};
}

std::vector<DataPoint> invert_s21(std::span<const DataPoint> s21) {
  std::vector<DataPoint> out;
  out.reserve(s21.size());
  for (const auto& d : s21) {
    if (d.y == cd(0.0)) throw DataError("S21 sample is zero and cannot be inverted");
    out.push_back({d.x, 1.0 / d.y, d.weight});
  }
  return out;
}

std::vector<double> guess_inv_s21(std::span<const DataPoint> inv) {
  if (inv.size() < 5) throw DataError("resonance trace needs at least five points");
  std::size_t peak = 0;
  for (std::size_t i = 0; i < inv.size(); ++i)
    if (std::abs(inv[i].y - 1.0) > std::abs(inv[peak].y - 1.0)) peak = i;
  const cd depth = inv[peak].y - 1.0;
  const double level = std::abs(depth) / std::numbers::sqrt2;
  auto mag = [&](std::size_t i) { return std::abs(inv[i].y - 1.0); };

  std::size_t lo = peak, hi = peak;
  while (lo > 0 && mag(lo - 1) >= level) --lo;
  while (hi + 1 < inv.size() && mag(hi + 1) >= level) ++hi;
  auto cross = [&](std::size_t in, std::size_t out) {
    const double mi = mag(in), mo = mag(out);
    if (mi == mo) return inv[in].x;
    return inv[out].x + (level - mo) * (inv[in].x - inv[out].x) / (mi - mo);
  };
  const double f_lo = lo > 0 ? cross(lo, lo - 1) : inv[lo].x;
  const double f_hi = hi + 1 < inv.size() ? cross(hi, hi + 1) : inv[hi].x;
  const double f0 = inv[peak].x;
  double width = f_hi - f_lo;
  if (!(width > 0.0)) width = std::abs(inv[std::min(peak + 1, inv.size() - 1)].x - inv[peak > 0 ? peak - 1 : 0].x);
  if (!(width > 0.0)) throw DataError("cannot estimate resonance linewidth");
  const double q_i = f0 / width;
  const double q_c = q_i / std::abs(depth);
  return {q_i, q_c, std::arg(depth), f0};
}

Hc2Fit fit_gl_hc2(std::span<const DataPoint> data, std::optional<double> t_c,
                  const FitOptions& opts) {
  auto init = guess_gl_hc2(data);
  if (t_c) init[1] = *t_c;
  Hc2Fit out{gl_hc2_model(t_c.has_value()), {}, 0};
  out.result = nlls_fit(out.model, data, init, opts);
  out.clamped_points = points_above_tc(data, out.result.params[1]);
  return out;
}

Hc2Fit fit_powerlaw_hc2(std::span<const DataPoint> data, std::optional<double> t_c,
                        const FitOptions& opts) {
  auto init = guess_powerlaw_hc2(data);
  if (t_c) init[3] = *t_c;
  Hc2Fit out{powerlaw_hc2_model(t_c.has_value()), {}, 0};
  out.result = nlls_fit(out.model, data, init, opts);
  out.clamped_points = points_above_tc(data, out.result.params[3]);
  return out;
}

ResonanceFit fit_resonance(std::span<const DataPoint> s21, const FitOptions& opts) {
  const auto inv = invert_s21(s21);
  const auto init = guess_inv_s21(inv);
  ResonanceFit out{inv_s21_model(init[3] / init[0]), {}};
  out.result = nlls_fit(out.model, inv, init, opts);
  return out;
}

ConductivityRegimes fit_conductivity_regimes(std::span<const std::pair<double, double>> trace,
                                             const RegimeWindows& w) {
  std::vector<double> xh, yh, xl, yl;
  for (const auto& [t, s] : trace) {
    if (t >= w.high_t.first && t <= w.high_t.second) {
      xh.push_back(t);
      yh.push_back(s);
    }
    if (t >= w.low_t.first && t <= w.low_t.second) {
      xl.push_back(std::sqrt(t));
      yl.push_back(s);
    }
  }
  if (xh.size() < 3) throw DataError("high-temperature window holds fewer than three points");
  if (xl.size() < 3) throw DataError("low-temperature window holds fewer than three points");
  return {ols_line(xh, yh), ols_line(xl, yl), xh.size(), xl.size()};
}

}  // namespace spinodal
