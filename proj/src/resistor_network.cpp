#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "spinodal/errors.hpp"
#include "spinodal/micro.hpp"

namespace spinodal {

void ConductivityMap::validate() const {
  spec.validate();
  if (sigma.size() != std::size_t(spec.cells()))
    throw DataError("conductivity map size does not match its grid");
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s)) throw DataError("conductivity must be positive and finite");
}

ConductivityMap two_phase_conductivity(const PhaseMap& map, double sigma_ti, double contrast) {
  if (!(sigma_ti > 0.0) || !(contrast > 0.0))
    throw DataError("conductivities must be positive");
  ConductivityMap c;
  c.spec = map.spec;
  c.sigma.reserve(map.labels.size());
  for (Phase p : map.labels) c.sigma.push_back(p == Phase::TiRich ? sigma_ti : sigma_ti * contrast);
  return c;
}

namespace {

// Network in "current along x" orientation; Axis::Y is handled by
// transposing the map first.
struct Network {
  int n_long;   // cells along the current
  int n_trans;  // cells across
  std::vector<double> sigma;   // [t * n_long + l]
  std::vector<double> g_long;  // bond (l, l+1) at row t: [t * (n_long-1) + l]
  std::vector<double> g_trans; // bond (t, t+1) at column l: [t * n_long + l]
  std::vector<double> diag;

  std::size_t idx(int l, int t) const { return std::size_t(t) * n_long + l; }
  double g_source(int t) const { return 2.0 * sigma[idx(0, t)]; }
  double g_sink(int t) const { return 2.0 * sigma[idx(n_long - 1, t)]; }

  // y = A x
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    for (int t = 0; t < n_trans; ++t)
      for (int l = 0; l < n_long; ++l) {
        const std::size_t k = idx(l, t);
        double v = diag[k] * x[k];
        if (l > 0) v -= g_long[std::size_t(t) * (n_long - 1) + l - 1] * x[k - 1];
        if (l < n_long - 1) v -= g_long[std::size_t(t) * (n_long - 1) + l] * x[k + 1];
        if (t > 0) v -= g_trans[idx(l, t - 1)] * x[k - n_long];
        if (t < n_trans - 1) v -= g_trans[idx(l, t)] * x[k + n_long];
        y[k] = v;
      }
  }

  Eigen::VectorXd rhs() const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(Eigen::Index(sigma.size()));
    for (int t = 0; t < n_trans; ++t) b[idx(0, t)] = g_source(t);
    return b;
  }

  double current(const Eigen::VectorXd& v) const {
    double i = 0.0;
    for (int t = 0; t < n_trans; ++t) i += g_source(t) * (1.0 - v[idx(0, t)]);
    return i;
  }

  // Dissipated power at unit bias. Equals the current for the exact
  // solution and is only second order in the potential error.
  double dissipation(const Eigen::VectorXd& v) const {
    double p = 0.0;
    for (int t = 0; t < n_trans; ++t) {
      const double a = 1.0 - v[idx(0, t)], b = v[idx(n_long - 1, t)];
      p += g_source(t) * a * a + g_sink(t) * b * b;
      for (int l = 0; l < n_long; ++l) {
        const std::size_t k = idx(l, t);
        if (l + 1 < n_long) {
          const double d = v[k + 1] - v[k];
          p += g_long[std::size_t(t) * (n_long - 1) + l] * d * d;
        }
        if (t + 1 < n_trans) {
          const double d = v[k + n_long] - v[k];
          p += g_trans[k] * d * d;
        }
      }
    }
    return p;
  }

  double r_square(double current) const { return double(n_trans) / (double(n_long) * current); }
};

double series(double a, double b) { return 2.0 * a * b / (a + b); }

Network build(const ConductivityMap& c, Axis axis) {
  c.validate();
  Network net;
  const int nx = c.spec.nx, ny = c.spec.ny;
  if (axis == Axis::X) {
    net.n_long = nx;
    net.n_trans = ny;
    net.sigma = c.sigma;
  } else {
    net.n_long = ny;
    net.n_trans = nx;
    net.sigma.resize(c.sigma.size());
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) net.sigma[net.idx(j, i)] = c.at(i, j);
  }
  const int L = net.n_long, T = net.n_trans;
  net.g_long.resize(std::size_t(T) * (L - 1));
  net.g_trans.assign(std::size_t(T) * L, 0.0);
  net.diag.assign(std::size_t(T) * L, 0.0);
  for (int t = 0; t < T; ++t)
    for (int l = 0; l + 1 < L; ++l) {
      const double g = series(net.sigma[net.idx(l, t)], net.sigma[net.idx(l + 1, t)]);
      net.g_long[std::size_t(t) * (L - 1) + l] = g;
      net.diag[net.idx(l, t)] += g;
      net.diag[net.idx(l + 1, t)] += g;
    }
  for (int t = 0; t + 1 < T; ++t)
    for (int l = 0; l < L; ++l) {
      const double g = series(net.sigma[net.idx(l, t)], net.sigma[net.idx(l, t + 1)]);
      net.g_trans[net.idx(l, t)] = g;
      net.diag[net.idx(l, t)] += g;
      net.diag[net.idx(l, t + 1)] += g;
    }
  for (int t = 0; t < T; ++t) {
    net.diag[net.idx(0, t)] += net.g_source(t);
    net.diag[net.idx(L - 1, t)] += net.g_sink(t);
  }
  return net;
}

}  // namespace

SheetResistance effective_sheet_resistance(const ConductivityMap& c, Axis axis,
                                           const CgOptions& opts) {
  const Network net = build(c, axis);
  const Eigen::Index n = Eigen::Index(net.sigma.size());
  const Eigen::VectorXd b = net.rhs();
  const Eigen::VectorXd inv_diag =
      Eigen::Map<const Eigen::VectorXd>(net.diag.data(), n).cwiseInverse();
  const int max_iter = opts.max_iter > 0 ? opts.max_iter : int(10 * n);

  // Start from the linear potential drop, which is exact for uniform maps.
  Eigen::VectorXd x(n);
  for (int t = 0; t < net.n_trans; ++t)
    for (int l = 0; l < net.n_long; ++l)
      x[Eigen::Index(net.idx(l, t))] = 1.0 - (l + 0.5) / net.n_long;

  Eigen::VectorXd r(n), z(n), p(n), q(n);
  net.apply(x, q);
  r = b - q;
  const double b_norm = b.norm();
  double res = r.norm() / b_norm;
  int it = 0;
  if (res > opts.rel_tol) {
    z = inv_diag.cwiseProduct(r);
    p = z;
    double rz = r.dot(z);
    for (it = 1; it <= max_iter; ++it) {
      net.apply(p, q);
      const double alpha = rz / p.dot(q);
      x.noalias() += alpha * p;
      r.noalias() -= alpha * q;
      res = r.norm() / b_norm;
      if (res <= opts.rel_tol) break;
      z = inv_diag.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (res > opts.rel_tol) {
      std::ostringstream msg;
      msg << "conjugate gradient did not converge in " << max_iter
          << " iterations, relative residual " << res;
      throw NumericalError(msg.str());
    }
  }
  const double current = net.dissipation(x);
  return {net.r_square(current), current, it, res};
}

double effective_sheet_resistance_dense(const ConductivityMap& c, Axis axis) {
  if (c.spec.nx > 32 || c.spec.ny > 32) throw DataError("dense solve is limited to 32x32 grids");
  const Network net = build(c, axis);
  const Eigen::Index n = Eigen::Index(net.sigma.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  auto bond = [&](std::size_t p, std::size_t q, double g) {
    a(p, p) += g;
    a(q, q) += g;
    a(p, q) -= g;
    a(q, p) -= g;
  };
  const int L = net.n_long, T = net.n_trans;
  for (int t = 0; t < T; ++t)
    for (int l = 0; l < L; ++l) {
      const double s = net.sigma[net.idx(l, t)];
      if (l + 1 < L) bond(net.idx(l, t), net.idx(l + 1, t), series(s, net.sigma[net.idx(l + 1, t)]));
      if (t + 1 < T) bond(net.idx(l, t), net.idx(l, t + 1), series(s, net.sigma[net.idx(l, t + 1)]));
    }
  for (int t = 0; t < T; ++t) {
    a(net.idx(0, t), net.idx(0, t)) += net.g_source(t);
    b[net.idx(0, t)] += net.g_source(t);
    a(net.idx(L - 1, t), net.idx(L - 1, t)) += net.g_sink(t);
  }
  const Eigen::VectorXd v = a.partialPivLu().solve(b);
  return net.r_square(net.current(v));
}

}  // namespace spinodal
