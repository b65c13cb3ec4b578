#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/models.hpp"
#include "nhsw/tier.hpp"

namespace nhsw {

/// Raised when a step cannot be completed (failed linear solve, non-finite
/// state, all-dry domain).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepControls {
  double cfl = 0.5;
  double dt_max = std::numeric_limits<double>::infinity();
  double t_end = 1.0;
  std::optional<double> fixed_dt;

  /// Throws std::invalid_argument unless 0 < cfl <= 1, dt_max > 0, t_end >= 0
  /// and fixed_dt (if set) > 0.
  void validate() const;
};

/// Everything that stays fixed during a run.
struct Problem {
  Grid grid;
  BathymetryField bathy;
  PhysicalParams params;
  ModelTier tier = ModelTier::Hydrostatic;
  SchemeOptions scheme;
};

/// dt = min(dt_max, cfl dx / max(|u| + sqrt(g H)), cfl dx^2 / (8 nu)) over
/// wet cells, or the fixed override. Throws SolverError on an all-dry domain.
double stable_dt(const FlowState& state, const PhysicalParams& params, const Grid& grid,
                 const StepControls& controls);

/// Same, with the viscous bound relaxed by the extra short-wave inertia of the
/// problem's dispersive operator.
double stable_dt(const FlowState& state, const Problem& problem, const StepControls& controls);

struct StepStats {
  int clamped = 0;            // heights clamped to zero during the step
  std::vector<double> accel;  // du_bar/dt from the first stage
};

/// Semi-discrete tendency (dH/dt, dq/dt) without the drag, plus the
/// acceleration a = du_bar/dt it implies.
struct Tendency {
  std::vector<double> dH;
  std::vector<double> dq;
  std::vector<double> accel;
  int clamped = 0;
};

Tendency evaluate_tendency(const FlowState& state, const Problem& problem);

/// One step of length dt: drag half-step, two-stage Heun for the remaining
/// terms (one implicit solve per stage on the dispersive tiers), drag
/// half-step.
FlowState step(const FlowState& state, const Problem& problem, double dt,
               StepStats* stats = nullptr);

FlowState step(const FlowState& state, const BathymetryField& bathy, const PhysicalParams& params,
               const Grid& grid, ModelTier tier, double dt);

/// Integrates the drag -D u_bar alone over dt with the trapezoidal rule,
/// through the tier's operator so that it sees the same inertia as the rest of
/// the momentum balance.
FlowState apply_drag(const FlowState& state, const Problem& problem, double dt);

using StepObserver = std::function<void(const FlowState& state, int step, double dt)>;

struct RunSummary {
  FlowState final_state;
  int steps = 0;
  int clamped = 0;
};

/// Steps from initial to controls.t_end; the last step is shortened to land
/// on t_end exactly. The observer is called after every step.
RunSummary integrate(const Problem& problem, FlowState initial, const StepControls& controls,
                     const StepObserver& observer = {});

}  // namespace nhsw
