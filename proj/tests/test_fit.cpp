#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "spinodal/errors.hpp"
#include "spinodal/fit_models.hpp"

using namespace spinodal;

namespace {

std::vector<DataPoint> gl_data(double xi, double tc, int n, double noise = 0.0, unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<DataPoint> d;
  for (int k = 0; k < n; ++k) {
    const double t = tc * (0.05 + 0.9 * k / (n - 1));
    d.push_back({t, model_gl_hc2(t, xi, tc) * (1.0 + noise * g(rng)), 1.0});
  }
  return d;
}

double max_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double scale = std::max(a.col(c).cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, (a.col(c) - b.col(c)).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("GL critical field values") {
  CHECK(model_gl_hc2(3.2, 7.7e-9, 3.2) == 0.0);
  CHECK(model_gl_hc2(4.0, 7.7e-9, 3.2) == 0.0);
  CHECK(std::abs(model_gl_hc2(0.0, 7.7e-9, 3.2) / 5.55 - 1.0) < 0.005);
  double prev = model_gl_hc2(0.0, 7.7e-9, 3.2);
  for (double t = 0.1; t < 3.2; t += 0.1) {
    const double v = model_gl_hc2(t, 7.7e-9, 3.2);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("power-law critical field values") {
  CHECK(model_powerlaw_hc2(3.2, 4.0, 3.6, 1.1, 3.2) == 0.0);
  CHECK(model_powerlaw_hc2(0.0, 4.0, 3.6, 1.1, 3.2) == 4.0);
  // Normalized to the same zero-temperature field, the power law sits above
  // the GL parabola near Tc.
  const double pl = model_powerlaw_hc2(0.9, 1.0, 3.6, 1.1, 1.0);
  const double gl = model_gl_hc2(0.9, 1e-8, 1.0) / model_gl_hc2(0.0, 1e-8, 1.0);
  CHECK(pl == doctest::Approx(std::pow(1.0 - std::pow(0.9, 3.6), 1.1)));
  CHECK(pl > gl);
}

TEST_CASE("inverse S21 closed-form limits") {
  const double qi = 2.7e5, qc = 1e5, phi = 0.1, f0 = 5e9;
  const auto at_f0 = model_inv_s21(f0, qi, qc, phi, f0);
  const auto expect = 1.0 + (qi / qc) * std::polar(1.0, phi);
  CHECK(std::abs(at_f0 - expect) <= 1e-12);
  CHECK(std::abs(model_inv_s21(f0 * (1 + 1e10), qi, qc, phi, f0) - 1.0) <= 1e-12);
  for (double df : {-3e4, -1e3, 2e2, 7e4}) {
    const auto a = model_inv_s21(f0 + df, qi, qc, phi, f0);
    const auto b = model_inv_s21(f0 - df, qi, qc, -phi, f0);
    CHECK(std::abs(a - std::conj(b)) <= 1e-12);
  }
  CHECK(internal_q(5e4, 1e5) == doctest::Approx(1e5));
}

TEST_CASE("analytic and numeric jacobians agree on every model") {
  const auto check = [](const FitModel& m, const std::vector<DataPoint>& d, const std::vector<double>& p) {
    const auto jn = numeric_jacobian(m, d, p, 1e-6);
    const auto ja = analytic_jacobian(m, d, p);
    CHECK(max_rel(ja, jn) < 1e-4);
  };
  check(gl_hc2_model(), gl_data(7.7e-9, 3.2, 20), {7.7e-9, 3.2});
  std::vector<DataPoint> pl;
  for (int k = 0; k < 20; ++k) pl.push_back({0.15 * k, 0.0, 1.0});
  check(powerlaw_hc2_model(), pl, {4.0, 3.6, 1.1, 3.2});
  std::vector<DataPoint> s;
  for (int k = -10; k <= 10; ++k) s.push_back({5e9 + 2e3 * k, 0.0, 1.0});
  check(inv_s21_model(5e9 / 2.7e5), s, {2.7e5, 1e5, 0.1, 5e9});
  check(line_model(), pl, {2.0, -1.0});
}

TEST_CASE("noiseless GL fit recovers xi") {
  const auto data = gl_data(7.7e-9, 3.2, 20);
  const auto model = gl_hc2_model();
  const std::vector<double> init{5e-9, 3.0};
  const auto r = nlls_fit(model, data, init);
  CHECK(r.converged);
  CHECK(std::abs(r.params[0] / 7.7e-9 - 1.0) < 1e-6);
  CHECK(std::abs(r.params[1] / 3.2 - 1.0) < 1e-6);
  CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < r.cost_history.size(); ++k) CHECK(r.cost_history[k] <= r.cost_history[k - 1]);
}

TEST_CASE("line fit matches closed-form least squares") {
  std::vector<DataPoint> d;
  std::vector<double> xs, ys;
  for (int k = 0; k < 15; ++k) {
    const double x = 0.3 * k - 1.0;
    const double y = 1.7 * x + 0.4 + 0.05 * std::sin(3.0 * k);
    d.push_back({x, y, 1.0});
    xs.push_back(x);
    ys.push_back(y);
  }
  const auto ols = ols_line(xs, ys);
  const std::vector<double> init{0.0, 0.0};
  const auto r = nlls_fit(line_model(), d, init);
  CHECK(std::abs(r.params[0] - ols.slope) <= 1e-10);
  CHECK(std::abs(r.params[1] - ols.intercept) <= 1e-10);
  CHECK(r.r2 == doctest::Approx(ols.r2).epsilon(1e-10));
  // R^2 against a hand-rolled evaluation.
  double my = 0, ss_tot = 0, ss_res = 0;
  for (double y : ys) my += y / ys.size();
  for (std::size_t k = 0; k < ys.size(); ++k) {
    ss_tot += (ys[k] - my) * (ys[k] - my);
    const double e = ys[k] - (r.params[0] * xs[k] + r.params[1]);
    ss_res += e * e;
  }
  CHECK(r.r2 == doctest::Approx(1.0 - ss_res / ss_tot).epsilon(1e-12));
}

TEST_CASE("perfect data gives R^2 = 1 exactly") {
  std::vector<DataPoint> d;
  for (int k = 0; k < 6; ++k) d.push_back({double(k), 2.0 * k + 1.0, 1.0});
  const std::vector<double> init{2.0, 1.0};
  const auto r = nlls_fit(line_model(), d, init);
  CHECK(r.ss_res == 0.0);
  CHECK(r.r2 == 1.0);
}

TEST_CASE("fit is invariant under data reordering") {
  auto data = gl_data(7.7e-9, 3.2, 20, 0.02, 5);
  const auto a = fit_gl_hc2(data);
  std::reverse(data.begin(), data.end());
  std::rotate(data.begin(), data.begin() + 7, data.end());
  const auto b = fit_gl_hc2(data);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(a.result.params[k] / b.result.params[k] - 1.0) < 1e-8);
}

TEST_CASE("singular normal equations are reported") {
  std::vector<DataPoint> d(5, DataPoint{1.0, 2.0, 1.0});
  const std::vector<double> init{1.0, 1.0};
  CHECK_THROWS_AS(nlls_fit(line_model(), d, init), NumericalError);
  std::vector<DataPoint> one{{1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(nlls_fit(line_model(), one, init), DataError);
}

TEST_CASE("iteration limit yields a flagged result") {
  const auto data = gl_data(7.7e-9, 3.2, 20);
  FitOptions o;
  o.max_iter = 1;
  const std::vector<double> init{2e-9, 2.0};
  const auto r = nlls_fit(gl_hc2_model(), data, init, o);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("covariance is symmetric positive semidefinite") {
  const auto f = fit_powerlaw_hc2([] {
    std::vector<DataPoint> d;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.02);
    for (int k = 0; k < 40; ++k) {
      const double t = 3.2 * (0.02 + 0.96 * k / 39.0);
      d.push_back({t, model_powerlaw_hc2(t, 4.0, 3.6, 1.1, 3.2) * (1 + g(rng)), 1.0});
    }
    return d;
  }(), 3.2);
  const auto& c = f.result.covariance;
  CHECK((c - c.transpose()).norm() <= 1e-14 * c.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  CHECK(c(3, 3) == 0.0);  // Tc held fixed
  CHECK(f.result.params[3] == 3.2);
}

TEST_CASE("initial-guess helpers") {
  const auto gl = guess_gl_hc2(gl_data(7.7e-9, 3.2, 12));
  CHECK(gl[0] == doctest::Approx(7.7e-9).epsilon(1e-9));
  CHECK(gl[1] == doctest::Approx(3.2).epsilon(1e-9));

  std::vector<DataPoint> inv;
  const double qi = 2e4, qc = 1e4, phi = -0.2, f0 = 6e9;
  for (int k = -100; k <= 100; ++k) {
    const double f = f0 + 0.05 * k * f0 / qi;
    inv.push_back({f, model_inv_s21(f, qi, qc, phi, f0), 1.0});
  }
  const auto g = guess_inv_s21(inv);
  CHECK(g[0] == doctest::Approx(qi).epsilon(0.02));
  CHECK(g[1] == doctest::Approx(qc).epsilon(0.02));
  CHECK(g[2] == doctest::Approx(phi).epsilon(1e-9));
  CHECK(g[3] == doctest::Approx(f0).epsilon(1e-12));
}

TEST_CASE("conductivity regimes") {
  std::vector<std::pair<double, double>> exact;
  for (double t = 5.0; t <= 300.0; t += 5.0) {
    const double s = t >= 100 ? 8000.0 - 3.0 * t : (t <= 60 ? 6000.0 + 40.0 * std::sqrt(t) : 7000.0);
    exact.emplace_back(t, s);
  }
  const auto r = fit_conductivity_regimes(exact);
  CHECK(r.high_t.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.high_t.slope == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(r.low_t.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.low_t.slope == doctest::Approx(40.0).epsilon(1e-10));
  std::vector<std::pair<double, double>> sparse{{10, 1}, {20, 2}, {150, 3}, {200, 4}, {250, 5}};
  CHECK_THROWS_AS(fit_conductivity_regimes(sparse), DataError);
}
