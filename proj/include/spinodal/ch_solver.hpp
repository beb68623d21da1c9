#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinodal/errors.hpp"
#include "spinodal/field.hpp"
#include "spinodal/thermo.hpp"

namespace spinodal {

/// Explicit finite-volume integrator for
///
///   dx/dt = div( D grad( G'(x) - 2 kappa lap(x) ) )
///
/// on a periodic grid. Defaults are solver units with D = kappa = h = 1.
struct SolverParams {
  double D = 1.0;
  double kappa = 1.0;
  double dt = 0.0;          ///< <= 0 selects default_dt()
  std::int64_t n_steps = 0; ///< 0 runs until the last snapshot time
  std::vector<double> snapshot_times{0.0, 10.0, 50.0, 500.0};
  int diag_stride = 1;      ///< diagnostics every `diag_stride` steps
  bool force_dt = false;    ///< skip the stability guard
  int threads = 1;

  void validate() const;
};

/// Largest dt for which forward Euler is linearly stable on the 5-point
/// biharmonic with |G''| <= 2: h^4 / (8 D (h^2 + 8 kappa)).
double stability_bound(double D, double kappa, double h);

/// min(h^4 / (100 D kappa), 0.75 * stability_bound).
double default_dt(double D, double kappa, double h);

/// dt actually used for `params` on a grid of spacing h.
double resolve_dt(const SolverParams& params, double h);

struct Diagnostics {
  std::int64_t step;
  double time;
  double mass;  ///< mean composition
  double free_energy;
  double min;
  double max;
};

struct SolverState {
  ScalarField2D field;
  double t = 0.0;
  std::int64_t step = 0;
  std::vector<Diagnostics> diagnostics;

  // Work buffers reused across steps.
  std::vector<double> work_lap;
  std::vector<double> work_mu;
};

/// Thrown when the divergence guard trips (|x| > 2 or non-finite).
class StabilityError : public NumericalError {
public:
  StabilityError(const std::string& what, std::int64_t step)
      : NumericalError(what), step_(step) {}
  std::int64_t step() const { return step_; }

  /// Last snapshot that passed the guard, filled in by run().
  std::optional<SolverState> last_stable;

private:
  std::int64_t step_;
};

SolverState make_state(ScalarField2D init, const GibbsModel& model, const SolverParams& params);

Diagnostics diagnose(const SolverState& state, const GibbsModel& model, double kappa);

/// G'(x) - 2 kappa lap(x).
ScalarField2D chemical_potential_field(const ScalarField2D& f, const GibbsModel& model,
                                       double kappa, int threads = 1);

/// One forward-Euler step, in place. Appends diagnostics when
/// step % diag_stride == 0. Throws StabilityError if the guard trips.
void ch_step(SolverState& state, const SolverParams& params, const GibbsModel& model);

struct Snapshot {
  double time;           ///< requested time
  std::int64_t step;     ///< step at which it was taken
  ScalarField2D field;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<Diagnostics> diagnostics;
  SolverState final_state;
};

/// Integrates from `init`, capturing each snapshot at the first step whose
/// time is at or after the requested time.
RunResult run(const ScalarField2D& init, const SolverParams& params, const GibbsModel& model);

/// Step index for snapshot time t: smallest n with n * dt >= t (up to round-off).
std::int64_t snapshot_step(double t, double dt);

}  // namespace spinodal
