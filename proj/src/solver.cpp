#include "nhsw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhsw {

void StepControls::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must be in (0, 1]");
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  if (fixed_dt && !(*fixed_dt > 0.0)) throw std::invalid_argument("fixed_dt must be positive");
}

namespace {

// inertia_length2[i] is the squared length scale that the dispersive operator
// adds to the inertia of short waves (empty for the hydrostatic bound).
double stable_dt_impl(const FlowState& state, const PhysicalParams& params, const Grid& grid,
                      const StepControls& controls, const std::vector<double>& inertia_length2) {
  if (controls.fixed_dt) return *controls.fixed_dt;
  const double dx = grid.dx();
  double smax = 0.0;
  double stiff = 0.0;
  bool any_wet = false;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.wet(i)) continue;
    any_wet = true;
    smax = std::max(smax, std::abs(state.velocity(i)) + std::sqrt(params.g * state.H[i]));
    // The explicit viscous stencil has eigenvalues down to -16 nu / dx^2 per
    // unit inertia; the dispersive operator adds 4 l^2 / (3 dx^2) to it.
    const double l2 = inertia_length2.empty() ? 0.0 : inertia_length2[i];
    stiff = std::max(stiff, 16.0 * params.nu / (dx * dx + 4.0 * l2 / 3.0));
  }
  if (!any_wet) throw SolverError("stable_dt: every cell is dry");
  double dt = std::min(controls.dt_max, controls.cfl * dx / smax);
  // Heun is stable on the negative real axis up to |lambda dt| = 2.
  if (stiff > 0.0) dt = std::min(dt, 2.0 * controls.cfl / stiff);
  return dt;
}

}  // namespace

double stable_dt(const FlowState& state, const PhysicalParams& params, const Grid& grid,
                 const StepControls& controls) {
  return stable_dt_impl(state, params, grid, controls, {});
}

double stable_dt(const FlowState& state, const Problem& problem, const StepControls& controls) {
  const PhysicalParams params = effective_params(problem.params, problem.tier);
  std::vector<double> l2;
  if (is_dispersive(problem.tier)) {
    // NonHydro1 and Peregrine weight the second difference with z_b^3 / 3,
    // NonHydro2 with H^3 / 3 (per unit height).
    l2.resize(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double z = problem.bathy.z(problem.grid.x(static_cast<int>(i)), state.t);
      l2[i] = problem.tier == ModelTier::NonHydro2 ? state.H[i] * state.H[i]
                                                    : std::abs(z * z * z) / std::max(state.H[i], kDryThreshold);
    }
  }
  return stable_dt_impl(state, params, problem.grid, controls, l2);
}

namespace {

// Clamps negative heights, freezes dry cells and rejects non-finite values.
int sanitize(FlowState& s) {
  int clamped = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.H[i]) || !std::isfinite(s.q[i]))
      throw SolverError("non-finite state in cell " + std::to_string(i) + " at t = " +
                        std::to_string(s.t));
    if (s.H[i] < 0.0) {
      s.H[i] = 0.0;
      ++clamped;
    }
    if (!s.wet(i)) s.q[i] = 0.0;
  }
  return clamped;
}

std::vector<double> solve_or_throw(const BandedMatrix& A, const std::vector<double>& b) {
  try {
    return A.solve(b);
  } catch (const std::runtime_error& e) {
    throw SolverError(std::string("implicit solve failed: ") + e.what());
  }
}

}  // namespace

Tendency evaluate_tendency(const FlowState& state, const Problem& problem) {
  const std::size_t n = state.size();
  Tendency out;
  out.accel.assign(n, 0.0);
  if (problem.tier == ModelTier::Hydrostatic) {
    HydrostaticTendency ht =
        hydrostatic_tendency(state, problem.bathy, problem.params, problem.grid, problem.scheme);
    for (std::size_t i = 0; i < n; ++i)
      if (state.wet(i))
        out.accel[i] = (ht.dq_explicit[i] - state.velocity(i) * ht.dH[i]) / state.H[i];
    out.dH = std::move(ht.dH);
    out.dq = std::move(ht.dq_explicit);
    out.clamped = ht.clamped;
    return out;
  }
  DispersiveSystem sys = assemble_dispersive(state, problem.bathy, problem.params, problem.grid,
                                             problem.tier, problem.scheme);
  out.accel = solve_or_throw(sys.A, sys.F);
  out.dq.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (state.wet(i)) out.dq[i] = state.H[i] * out.accel[i] + state.velocity(i) * sys.dH[i];
  out.dH = std::move(sys.dH);
  out.clamped = sys.clamped;
  return out;
}

FlowState apply_drag(const FlowState& state, const Problem& problem, double dt) {
  const std::vector<double> D =
      drag_coefficients(state, problem.bathy, problem.params, problem.grid, problem.tier);
  if (std::all_of(D.begin(), D.end(), [](double d) { return d == 0.0; })) return state;

  const std::size_t n = state.size();
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -dt * D[i] * state.velocity(i);

  BandedMatrix A = dispersive_operator(state, problem.bathy, problem.grid, problem.tier);
  for (std::size_t i = 0; i < n; ++i)
    if (state.wet(i)) A.add(static_cast<int>(i), static_cast<int>(i), 0.5 * dt * D[i]);
  const std::vector<double> du = solve_or_throw(A, rhs);

  FlowState out = state;
  for (std::size_t i = 0; i < n; ++i)
    if (state.wet(i)) out.q[i] = state.H[i] * (state.velocity(i) + du[i]);
  return out;
}

FlowState step(const FlowState& state, const Problem& problem, double dt, StepStats* stats) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  state.validate(problem.grid);
  const std::size_t n = state.size();
  int clamped = 0;

  const FlowState s0 = apply_drag(state, problem, 0.5 * dt);

  const Tendency k0 = evaluate_tendency(s0, problem);
  FlowState s1 = s0;
  s1.t = s0.t + dt;
  for (std::size_t i = 0; i < n; ++i) {
    s1.H[i] = s0.H[i] + dt * k0.dH[i];
    s1.q[i] = s0.q[i] + dt * k0.dq[i];
  }
  clamped += sanitize(s1);

  const Tendency k1 = evaluate_tendency(s1, problem);
  FlowState next = s0;
  next.t = s0.t + dt;
  for (std::size_t i = 0; i < n; ++i) {
    next.H[i] = 0.5 * (s0.H[i] + s1.H[i] + dt * k1.dH[i]);
    next.q[i] = 0.5 * (s0.q[i] + s1.q[i] + dt * k1.dq[i]);
  }
  clamped += sanitize(next);

  next = apply_drag(next, problem, 0.5 * dt);

  if (stats) {
    stats->clamped += clamped + k0.clamped + k1.clamped;
    stats->accel = k0.accel;
  }
  return next;
}

FlowState step(const FlowState& state, const BathymetryField& bathy, const PhysicalParams& params,
               const Grid& grid, ModelTier tier, double dt) {
  const Problem problem{grid, bathy, params, tier, {}};
  return step(state, problem, dt);
}

RunSummary integrate(const Problem& problem, FlowState initial, const StepControls& controls,
                     const StepObserver& observer) {
  controls.validate();
  RunSummary summary;
  summary.final_state = std::move(initial);
  FlowState& s = summary.final_state;
  const double tol = 1e-12 * std::max(1.0, std::abs(controls.t_end));
  while (s.t < controls.t_end - tol) {
    double dt = stable_dt(s, problem, controls);
    dt = std::min(dt, controls.t_end - s.t);
    StepStats stats;
    s = step(s, problem, dt, &stats);
    ++summary.steps;
    summary.clamped += stats.clamped;
    if (observer) observer(s, summary.steps, dt);
  }
  return summary;
}

}  // namespace nhsw
