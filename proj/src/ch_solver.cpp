#include "spinodal/ch_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinodal {

void SolverParams::validate() const {
  if (!(D > 0.0)) throw DataError("solver.D must be positive");
  if (!(kappa > 0.0)) throw DataError("solver.kappa must be positive");
  if (std::isnan(dt)) throw DataError("solver.dt must be a number");
  if (n_steps < 0) throw DataError("solver.n_steps must be non-negative");
  if (diag_stride < 1) throw DataError("solver.diag_stride must be at least 1");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw DataError("solver.snapshot_times must be sorted ascending");
  for (double t : snapshot_times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw DataError("solver.snapshot_times must be finite and non-negative");
}

double stability_bound(double D, double kappa, double h) {
  const double h2 = h * h;
  return h2 * h2 / (8.0 * D * (h2 + 8.0 * kappa));
}

double default_dt(double D, double kappa, double h) {
  const double h2 = h * h;
  return std::min(h2 * h2 / (100.0 * D * kappa), 0.75 * stability_bound(D, kappa, h));
}

double resolve_dt(const SolverParams& params, double h) {
  const double dt = params.dt > 0.0 ? params.dt : default_dt(params.D, params.kappa, h);
  if (!params.force_dt && dt > stability_bound(params.D, params.kappa, h)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the explicit stability bound "
        << stability_bound(params.D, params.kappa, h) << " (use --force-dt to override)";
    throw DataError(msg.str());
  }
  return dt;
}

std::int64_t snapshot_step(double t, double dt) {
  const double n = t / dt;
  const double r = std::round(n);
  if (std::abs(n - r) <= 1e-9 * std::max(1.0, r)) return std::int64_t(r);
  return std::int64_t(std::ceil(n));
}

Diagnostics diagnose(const SolverState& state, const GibbsModel& model, double kappa) {
  const FieldStats s = field_stats(state.field);
  return {state.step, state.t, s.mean, free_energy(state.field, model, kappa), s.min, s.max};
}

SolverState make_state(ScalarField2D init, const GibbsModel& model, const SolverParams& params) {
  if (!init.all_finite()) throw DataError("initial field contains non-finite values");
  SolverState state;
  state.field = std::move(init);
  state.diagnostics.push_back(diagnose(state, model, params.kappa));
  return state;
}

namespace {

// out = G'(x) - 2 kappa lap, elementwise.
void chemical_potential(std::span<const double> x, std::span<const double> lap,
                        std::span<double> out, const GibbsModel& model, double kappa,
                        const GridSpec& spec, int threads) {
  const int nx = spec.nx;
  parallel_rows(spec.ny, threads, [&](int j0, int j1) {
    const std::size_t b = std::size_t(j0) * nx, e = std::size_t(j1) * nx;
    for (std::size_t k = b; k < e; ++k) out[k] = dgibbs(model, x[k]) - 2.0 * kappa * lap[k];
  });
}

}  // namespace

ScalarField2D chemical_potential_field(const ScalarField2D& f, const GibbsModel& model,
                                       double kappa, int threads) {
  ScalarField2D lap = laplacian_periodic(f, threads);
  ScalarField2D mu(f.spec());
  chemical_potential(f.data(), lap.data(), mu.data(), model, kappa, f.spec(), threads);
  return mu;
}

void ch_step(SolverState& state, const SolverParams& params, const GibbsModel& model) {
  const GridSpec& spec = state.field.spec();
  const double dt = resolve_dt(params, spec.h);
  const std::size_t n = std::size_t(spec.cells());
  state.work_lap.resize(n);
  state.work_mu.resize(n);
  std::span<double> lap(state.work_lap);
  std::span<double> mu(state.work_mu);

  laplacian_periodic(state.field.data(), lap, spec, params.threads);
  chemical_potential(state.field.data(), lap, mu, model, params.kappa, spec, params.threads);
  laplacian_periodic(mu, lap, spec, params.threads);

  // Stage the update in `mu` so a failed guard leaves the state untouched.
  const auto x = state.field.data();
  const double scale = dt * params.D;
  bool bad = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = x[k] + scale * lap[k];
    mu[k] = v;
    bad |= !(std::abs(v) <= 2.0);
  }
  const std::int64_t next = state.step + 1;
  if (bad) {
    std::ostringstream msg;
    msg << "divergence at step " << next << " (t = " << double(next) * dt
        << "): composition left [-2, 2] or became non-finite";
    throw StabilityError(msg.str(), next);
  }
  std::copy(mu.begin(), mu.end(), x.begin());
  state.step = next;
  state.t = double(next) * dt;
  if (next % params.diag_stride == 0)
    state.diagnostics.push_back(diagnose(state, model, params.kappa));
}

RunResult run(const ScalarField2D& init, const SolverParams& params, const GibbsModel& model) {
  params.validate();
  const double dt = resolve_dt(params, init.h());

  std::int64_t last = params.n_steps;
  if (last == 0 && !params.snapshot_times.empty())
    last = snapshot_step(params.snapshot_times.back(), dt);

  RunResult result;
  SolverState state = make_state(init, model, params);
  auto next_snap = params.snapshot_times.begin();
  auto capture = [&] {
    while (next_snap != params.snapshot_times.end() && snapshot_step(*next_snap, dt) <= state.step) {
      result.snapshots.push_back({*next_snap, state.step, state.field});
      ++next_snap;
    }
  };
  capture();
  try {
    while (state.step < last) {
      ch_step(state, params, model);
      capture();
    }
  } catch (StabilityError& e) {
    e.last_stable = state;
    e.last_stable->work_lap.clear();
    e.last_stable->work_mu.clear();
    throw;
  }
  result.diagnostics = state.diagnostics;
  state.work_lap.clear();
  state.work_mu.clear();
  result.final_state = std::move(state);
  return result;
}

}  // namespace spinodal
