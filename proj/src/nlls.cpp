#include "spinodal/nlls.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "spinodal/errors.hpp"

namespace spinodal {

namespace {

std::size_t rows_per_point(const FitModel& m) { return m.complex_valued ? 2 : 1; }

// Model predictions scaled by sqrt(w), stacked like the residuals.
Eigen::VectorXd predictions(const FitModel& model, std::span<const DataPoint> data,
                            std::span<const double> p) {
  const std::size_t r = rows_per_point(model);
  Eigen::VectorXd out(Eigen::Index(data.size() * r));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double sw = std::sqrt(data[i].weight);
    const std::complex<double> v = model.eval(p, data[i].x);
    out[Eigen::Index(i * r)] = sw * v.real();
    if (r == 2) out[Eigen::Index(i * r + 1)] = sw * v.imag();
  }
  return out;
}

Eigen::VectorXd observations(const FitModel& model, std::span<const DataPoint> data) {
  const std::size_t r = rows_per_point(model);
  Eigen::VectorXd out(Eigen::Index(data.size() * r));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double sw = std::sqrt(data[i].weight);
    out[Eigen::Index(i * r)] = sw * data[i].y.real();
    if (r == 2) out[Eigen::Index(i * r + 1)] = sw * data[i].y.imag();
  }
  return out;
}

// Maps unconstrained internal coordinates of the free parameters to
// external parameter values.
class Transform {
public:
  Transform(const FitModel& model, std::span<const double> init)
      : model_(model), base_(init.begin(), init.end()) {
    for (std::size_t k = 0; k < model.size(); ++k) {
      const ParamSpec& ps = model.params[k];
      if (!std::isfinite(init[k])) throw DataError("initial value of " + ps.name + " is not finite");
      if (ps.fixed) continue;
      if (ps.bound == Bound::Positive && !(init[k] > 0.0))
        throw DataError("initial value of " + ps.name + " must be positive");
      if (ps.bound == Bound::Interval && !(init[k] > ps.lo && init[k] < ps.hi))
        throw DataError("initial value of " + ps.name + " must lie inside its bounds");
      if (ps.bound == Bound::None && !(ps.scale > 0.0))
        throw DataError("scale of " + ps.name + " must be positive");
      free_.push_back(k);
    }
  }

  std::size_t free_count() const { return free_.size(); }
  const std::vector<std::size_t>& free_indices() const { return free_; }

  Eigen::VectorXd initial() const {
    Eigen::VectorXd u(Eigen::Index(free_.size()));
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const ParamSpec& ps = model_.params[free_[f]];
      const double p = base_[free_[f]];
      switch (ps.bound) {
        case Bound::None:
        case Bound::Positive:
          u[Eigen::Index(f)] = 0.0;
          break;
        case Bound::Interval: {
          const double s = (p - ps.lo) / (ps.hi - ps.lo);
          u[Eigen::Index(f)] = std::log(s / (1.0 - s));
          break;
        }
      }
    }
    return u;
  }

  std::vector<double> external(const Eigen::VectorXd& u) const {
    std::vector<double> p = base_;
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const ParamSpec& ps = model_.params[free_[f]];
      const double v = u[Eigen::Index(f)];
      switch (ps.bound) {
        case Bound::None: p[free_[f]] = base_[free_[f]] + ps.scale * v; break;
        case Bound::Positive: p[free_[f]] = base_[free_[f]] * std::exp(v); break;
        case Bound::Interval: p[free_[f]] = ps.lo + (ps.hi - ps.lo) / (1.0 + std::exp(-v)); break;
      }
    }
    return p;
  }

  // dp / du for each free parameter.
  Eigen::VectorXd derivative(const Eigen::VectorXd& u) const {
    Eigen::VectorXd d(Eigen::Index(free_.size()));
    const auto p = external(u);
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const ParamSpec& ps = model_.params[free_[f]];
      switch (ps.bound) {
        case Bound::None: d[Eigen::Index(f)] = ps.scale; break;
        case Bound::Positive: d[Eigen::Index(f)] = p[free_[f]]; break;
        case Bound::Interval: {
          const double s = 1.0 / (1.0 + std::exp(-u[Eigen::Index(f)]));
          d[Eigen::Index(f)] = (ps.hi - ps.lo) * s * (1.0 - s);
          break;
        }
      }
    }
    return d;
  }

private:
  const FitModel& model_;
  std::vector<double> base_;
  std::vector<std::size_t> free_;
};

double step_for(const ParamSpec& ps, double p, double rel) {
  if (ps.bound == Bound::None) return rel * ps.scale;
  return rel * std::max(std::abs(p), std::numeric_limits<double>::min() * 1e10);
}

// d predictions / d u for the free parameters.
Eigen::MatrixXd internal_jacobian(const FitModel& model, std::span<const DataPoint> data,
                                  const Transform& tr, const Eigen::VectorXd& u,
                                  const FitOptions& opts) {
  const auto p = tr.external(u);
  if (opts.analytic_jacobian && model.gradient) {
    const Eigen::MatrixXd jp = -analytic_jacobian(model, data, p);
    const Eigen::VectorXd dpdu = tr.derivative(u);
    Eigen::MatrixXd j(jp.rows(), Eigen::Index(tr.free_count()));
    for (std::size_t f = 0; f < tr.free_count(); ++f)
      j.col(Eigen::Index(f)) = jp.col(Eigen::Index(tr.free_indices()[f])) * dpdu[Eigen::Index(f)];
    return j;
  }
  const Eigen::Index n = Eigen::Index(tr.free_count());
  Eigen::MatrixXd j(Eigen::Index(data.size() * rows_per_point(model)), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = opts.fd_step * std::max(1.0, std::abs(u[k]));
    Eigen::VectorXd up = u, um = u;
    up[k] += h;
    um[k] -= h;
    j.col(k) = (predictions(model, data, tr.external(up)) -
                predictions(model, data, tr.external(um))) / (2.0 * h);
  }
  return j;
}

}  // namespace

Eigen::VectorXd residuals(const FitModel& model, std::span<const DataPoint> data,
                          std::span<const double> p) {
  return observations(model, data) - predictions(model, data, p);
}

Eigen::MatrixXd numeric_jacobian(const FitModel& model, std::span<const DataPoint> data,
                                 std::span<const double> p, double step) {
  const Eigen::Index n = Eigen::Index(model.size());
  Eigen::MatrixXd j(Eigen::Index(data.size() * rows_per_point(model)), n);
  std::vector<double> q(p.begin(), p.end());
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = step_for(model.params[std::size_t(k)], p[std::size_t(k)], step);
    q[std::size_t(k)] = p[std::size_t(k)] + h;
    const Eigen::VectorXd rp = residuals(model, data, q);
    q[std::size_t(k)] = p[std::size_t(k)] - h;
    const Eigen::VectorXd rm = residuals(model, data, q);
    q[std::size_t(k)] = p[std::size_t(k)];
    j.col(k) = (rp - rm) / (2.0 * h);
  }
  return j;
}

Eigen::MatrixXd analytic_jacobian(const FitModel& model, std::span<const DataPoint> data,
                                  std::span<const double> p) {
  if (!model.gradient) throw DataError("model " + model.name + " has no analytic gradient");
  const std::size_t r = rows_per_point(model);
  const std::size_t n = model.size();
  Eigen::MatrixXd j(Eigen::Index(data.size() * r), Eigen::Index(n));
  std::vector<std::complex<double>> g(n);
  for (std::size_t i = 0; i < data.size(); ++i) {
    model.gradient(p, data[i].x, g);
    const double sw = std::sqrt(data[i].weight);
    for (std::size_t k = 0; k < n; ++k) {
      j(Eigen::Index(i * r), Eigen::Index(k)) = -sw * g[k].real();
      if (r == 2) j(Eigen::Index(i * r + 1), Eigen::Index(k)) = -sw * g[k].imag();
    }
  }
  return j;
}

double r_squared(const FitModel& model, std::span<const DataPoint> data,
                 std::span<const double> p) {
  double wsum = 0.0;
  std::complex<double> mean = 0.0;
  for (const auto& d : data) {
    wsum += d.weight;
    mean += d.weight * d.y;
  }
  mean /= wsum;
  double ss_tot = 0.0, ss_res = 0.0;
  for (const auto& d : data) {
    std::complex<double> m = model.eval(p, d.x);
    if (!model.complex_valued) m = m.real();
    ss_tot += d.weight * std::norm(d.y - mean);
    ss_res += d.weight * std::norm(d.y - m);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

FitResult nlls_fit(const FitModel& model, std::span<const DataPoint> data,
                   std::span<const double> init, const FitOptions& opts) {
  if (init.size() != model.size()) throw DataError("initial guess size does not match " + model.name);
  const Transform tr(model, init);
  const std::size_t n_res = data.size() * rows_per_point(model);
  if (n_res < tr.free_count() || data.size() < tr.free_count())
    throw DataError("fit of " + model.name + " needs at least as many points as parameters");

  const Eigen::VectorXd y = observations(model, data);
  Eigen::VectorXd u = tr.initial();
  auto cost_at = [&](const Eigen::VectorXd& uu) {
    return (y - predictions(model, data, tr.external(uu))).squaredNorm();
  };

  FitResult res;
  double cost = cost_at(u);
  if (!std::isfinite(cost)) throw NumericalError("model " + model.name + " is not finite at the initial guess");
  res.cost_history.push_back(cost);

  {
    const Eigen::MatrixXd j0 = internal_jacobian(model, data, tr, u, opts);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(j0);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    const double smin = sv.size() ? sv[sv.size() - 1] : 0.0;
    if (!(smin > smax * 1e-12)) {
      std::ostringstream msg;
      msg << "singular normal equations for " << model.name << ": condition estimate "
          << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
      throw NumericalError(msg.str());
    }
  }

  double lambda = opts.lambda0;
  std::string stop = "iteration limit reached";
  for (res.iterations = 1; res.iterations <= opts.max_iter; ++res.iterations) {
    if (cost == 0.0) {
      res.converged = true;
      stop = "exact fit";
      break;
    }
    const Eigen::MatrixXd j = internal_jacobian(model, data, tr, u, opts);
    const Eigen::VectorXd e = y - predictions(model, data, tr.external(u));
    const Eigen::MatrixXd a = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * e;
    Eigen::VectorXd damp = a.diagonal();
    for (Eigen::Index k = 0; k < damp.size(); ++k)
      if (!(damp[k] > 0.0)) damp[k] = 1.0;

    bool accepted = false;
    bool done = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = a;
      lhs.diagonal() += lambda * damp;
      const Eigen::VectorXd step = lhs.ldlt().solve(g);
      const Eigen::VectorXd trial = u + step;
      const double c = cost_at(trial);
      if (std::isfinite(c) && c < cost) {
        const double reduction = (cost - c) / cost;
        u = trial;
        cost = c;
        res.cost_history.push_back(cost);
        lambda = std::max(lambda / opts.nu, 1e-15);
        accepted = true;
        if (reduction < opts.rel_reduction) {
          done = true;
          stop = "relative reduction below tolerance";
        } else if (step.norm() < opts.step_tol * (u.norm() + opts.step_tol)) {
          done = true;
          stop = "step below tolerance";
        }
      } else {
        lambda *= opts.nu;
        if (lambda > 1e16) {
          done = true;
          stop = "no further descent";
          break;
        }
      }
    }
    if (done) {
      res.converged = true;
      break;
    }
  }
  if (res.iterations > opts.max_iter) res.iterations = opts.max_iter;
  res.diagnostics = stop;

  res.params = tr.external(u);
  res.ss_res = cost;
  res.r2 = r_squared(model, data, res.params);

  // Covariance in external coordinates: s^2 (J^T J)^-1 over the free parameters.
  const std::size_t n = model.size();
  res.covariance = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
  res.std_errors.assign(n, 0.0);
  {
    const Eigen::MatrixXd ju = internal_jacobian(model, data, tr, u, opts);
    const Eigen::VectorXd dpdu = tr.derivative(u);
    Eigen::MatrixXd jp = ju;
    for (Eigen::Index k = 0; k < jp.cols(); ++k) jp.col(k) /= dpdu[k];
    const double dof = double(n_res) - double(tr.free_count());
    const double s2 = dof > 0.0 ? cost / dof : 0.0;
    const Eigen::MatrixXd jtj = jp.transpose() * jp;
    const Eigen::MatrixXd cov_free =
        s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
    const auto& idx = tr.free_indices();
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b)
        res.covariance(Eigen::Index(idx[a]), Eigen::Index(idx[b])) =
            0.5 * (cov_free(Eigen::Index(a), Eigen::Index(b)) + cov_free(Eigen::Index(b), Eigen::Index(a)));
    for (std::size_t k = 0; k < n; ++k)
      res.std_errors[k] = std::sqrt(std::max(0.0, res.covariance(Eigen::Index(k), Eigen::Index(k))));
  }
  {
    double wsum = 0.0;
    std::complex<double> mean = 0.0;
    for (const auto& d : data) {
      wsum += d.weight;
      mean += d.weight * d.y;
    }
    mean /= wsum;
    res.ss_tot = 0.0;
    for (const auto& d : data)
      res.ss_tot += d.weight * std::norm((model.complex_valued ? d.y : d.y.real()) -
                                         (model.complex_valued ? mean : mean.real()));
  }
  return res;
}

}  // namespace spinodal
