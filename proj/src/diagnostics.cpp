#include "nhsw/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nhsw/closures.hpp"

namespace nhsw {

namespace {

constexpr double kPi = std::numbers::pi;

// Cellwise fields shared by the energy functionals.
struct EnergyFields {
  std::vector<double> x, H, u, z, eta, s, zxx, zt, zxt, ztt, pa, pa_t, u_x, u_xx, H_x, eta_x, q_x;
};

EnergyFields energy_fields(const FlowState& state, const BathymetryField& bathy,
                           const PhysicalParams& params, const Grid& grid) {
  state.validate(grid);
  const auto n = static_cast<std::size_t>(grid.n_cells());
  const double t = state.t;
  EnergyFields f;
  f.x = grid.centers();
  f.H = state.H;
  f.u = state.velocities();
  f.z.resize(n);
  f.eta.resize(n);
  f.s.resize(n);
  f.zxx.resize(n);
  f.zt.resize(n);
  f.zxt.resize(n);
  f.ztt.resize(n);
  f.pa.resize(n);
  f.pa_t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = f.x[i];
    f.z[i] = bathy.z(x, t);
    f.eta[i] = f.z[i] + f.H[i];
    f.s[i] = bathy.dz_dx(x, t);
    f.zxx[i] = bathy.d2z_dx2(x, t);
    f.zt[i] = bathy.dz_dt(x, t);
    f.zxt[i] = bathy.d2z_dxdt(x, t);
    f.ztt[i] = bathy.d2z_dt2(x, t);
    f.pa[i] = pressure_value(params.p_atm, x, t);
    f.pa_t[i] = pressure_dt(params.p_atm, x, t);
  }
  f.u_x = centered_derivative(f.u, grid, true);
  f.u_xx = centered_derivative(f.u_x, grid, false);
  f.H_x = centered_derivative(f.H, grid, false);
  f.eta_x = centered_derivative(f.eta, grid, false);
  f.q_x = centered_derivative(state.q, grid, true);
  return f;
}

// -4 nu sum_faces H_f (du)^2 / dx, the discrete viscous dissipation of the
// staggered viscous flux.
double viscous_rate(const EnergyFields& f, const Grid& grid, double nu) {
  if (nu == 0.0) return 0.0;
  const int n = grid.n_cells();
  double rate = 0.0;
  for (int k = grid.boundary() == Boundary::Periodic ? 0 : -1; k < n; ++k) {
    const double Hf = 0.5 * (ghost_value(f.H, k, grid) + ghost_value(f.H, k + 1, grid));
    const double du = ghost_value(f.u, k + 1, grid, true) - ghost_value(f.u, k, grid, true);
    rate -= 4.0 * nu * Hf * du * du / grid.dx();
  }
  return rate;
}

ColumnState column(const EnergyFields& f, const PhysicalParams& params, std::size_t i,
                   const std::vector<double>& accel, const std::vector<double>& accel_x) {
  ColumnState c;
  c.H = f.H[i];
  c.z_b = f.z[i];
  c.u_bar = f.u[i];
  c.du_dx = f.u_x[i];
  c.d2u_dx2 = f.u_xx[i];
  c.dzb_dx = f.s[i];
  c.d2zb_dx2 = f.zxx[i];
  c.dzb_dt = f.zt[i];
  c.d2zb_dt2 = f.ztt[i];
  c.d2zb_dxdt = f.zxt[i];
  c.deta_dx = f.eta_x[i];
  c.deta_dt = f.zt[i] - f.q_x[i];
  c.accel = accel.empty() ? 0.0 : accel[i];
  c.daccel_dx = accel_x.empty() ? 0.0 : accel_x[i];
  c.p_atm = f.pa[i];
  c.g = params.g;
  c.nu = params.nu;
  return c;
}

}  // namespace

std::vector<ColumnState> column_states(const FlowState& state, const BathymetryField& bathy,
                                       const PhysicalParams& params, const Grid& grid,
                                       const std::vector<double>& accel) {
  const auto f = energy_fields(state, bathy, params, grid);
  std::vector<double> accel_x;
  if (!accel.empty()) accel_x = centered_derivative(accel, grid, true);
  std::vector<ColumnState> cols;
  cols.reserve(f.H.size());
  for (std::size_t i = 0; i < f.H.size(); ++i) cols.push_back(column(f, params, i, accel, accel_x));
  return cols;
}

EnergyReport energy_hydro(const FlowState& state, const BathymetryField& bathy,
                          const PhysicalParams& params, const Grid& grid) {
  const EnergyFields f = energy_fields(state, bathy, params, grid);
  const double dx = grid.dx();
  const double g = params.g;
  EnergyReport r;
  r.t = state.t;
  double rate = viscous_rate(f, grid, params.nu);
  for (std::size_t i = 0; i < f.H.size(); ++i) {
    const double H = f.H[i];
    const double u = f.u[i];
    r.mass += H * dx;
    r.momentum += state.q[i] * dx;
    r.E_h += (0.5 * H * u * u + 0.5 * g * H * (f.eta[i] + f.z[i]) + H * f.pa[i]) * dx;
    double local = -H * f.pa_t[i] + g * H * f.zt[i];
    if (state.wet(i)) {
      const double kappa = friction_kappa(u, f.s[i], H, params);
      local -= effective_friction(kappa, H, params.nu) * u * u;
    }
    rate += local * dx;
  }
  r.E_ext = r.E_h;
  r.modeled_rate = rate;
  return r;
}

EnergyReport energy_extended(const FlowState& state, const BathymetryField& bathy,
                             const PhysicalParams& params_in, const Grid& grid, ModelTier tier,
                             const std::vector<double>& accel) {
  if (!is_dispersive(tier))
    throw std::invalid_argument("energy_extended requires a dispersive tier");
  const PhysicalParams params = effective_params(params_in, tier);
  const EnergyFields f = energy_fields(state, bathy, params, grid);
  const std::vector<double> accel_x =
      accel.empty() ? std::vector<double>{} : centered_derivative(accel, grid, true);
  const double dx = grid.dx();
  const double g = params.g;
  const bool second = tier == ModelTier::NonHydro2;

  EnergyReport r;
  r.t = state.t;
  double rate = viscous_rate(f, grid, params.nu);
  double indefinite = 0.0;
  for (std::size_t i = 0; i < f.H.size(); ++i) {
    const double H = f.H[i];
    const double u = f.u[i];
    const double s = f.s[i];
    const double z = f.z[i];
    const double potential = 0.5 * g * H * (f.eta[i] + z) + H * f.pa[i];
    r.mass += H * dx;
    r.momentum += state.q[i] * dx;
    r.E_h += (0.5 * H * u * u + potential) * dx;

    double local = -H * f.pa_t[i] + g * H * f.zt[i];
    if (!state.wet(i)) {
      r.E_ext += potential * dx;
      rate += local * dx;
      continue;
    }
    const ColumnState col = column(f, params, i, accel, accel_x);
    const double w2 = column_w2_integral(col);
    const double kappa = friction_kappa(u, s, H, params);
    const double k_eff = effective_friction(kappa, H, params.nu);

    if (second) {
      const double Hm = H * modified_height_factor(kappa, H, params.nu);
      r.E_ext += (0.5 * Hm * u * u + 0.5 * w2 + potential) * dx;
      const double grad = H * f.u_x[i] + f.H_x[i] * u;
      const double ex = f.eta_x[i];
      const double cross = -kappa / 3.0 * ((s - 0.25 * ex) * (s - 0.25 * ex) - ex * ex / 8.0) * u * u;
      indefinite += cross * dx;
      local += -kappa / 6.0 * grad * grad + cross - k_eff * (1.0 + 1.5 * s * s) * u * u -
               0.5 * kappa * H * f.zxt[i] * u;
      if (f.zt[i] != 0.0) local += nonhydro2_excess_bottom(col) * f.zt[i];
    } else {
      r.E_ext += (0.5 * H * u * u + 0.5 * w2 + potential) * dx;
      const double grad = z * f.u_x[i] + s * u;
      local += -kappa / 6.0 * grad * grad - k_eff * (1.0 + 11.0 / 6.0 * s * s) * u * u +
               0.5 * kappa * z * f.zxt[i] * u;
      if (f.zt[i] != 0.0)
        local += (pressure_nonhydrostatic(col, z, tier) - pressure_hydrostatic(col, z)) * f.zt[i];
    }
    rate += local * dx;
  }
  r.modeled_rate = rate;
  r.indefinite_rate = indefinite;
  return r;
}

EnergyTracker::EnergyTracker(const Problem& problem) : problem_(&problem) {}

const EnergyReport& EnergyTracker::record(const FlowState& state, const std::vector<double>& accel) {
  const Problem& p = *problem_;
  EnergyReport r = p.tier == ModelTier::Hydrostatic
                       ? energy_hydro(state, p.bathy, p.params, p.grid)
                       : energy_extended(state, p.bathy, p.params, p.grid, p.tier, accel);
  if (!reports_.empty()) {
    const EnergyReport& prev = reports_.back();
    const double dt = r.t - prev.t;
    if (dt > 0.0) {
      r.dissipation_rate = (r.E_ext - prev.E_ext) / dt;
      r.budget_residual = std::abs(r.dissipation_rate - 0.5 * (prev.modeled_rate + r.modeled_rate));
    }
  }
  reports_.push_back(r);
  return reports_.back();
}

// ---------------------------------------------------------------------------

double measure_dispersion(const std::vector<SurfaceSnapshot>& snapshots, const Grid& grid, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (2.0 * kPi / (k * grid.dx()) < 16.0)
    throw std::invalid_argument("wavenumber is aliased: fewer than 16 cells per wavelength");
  if (snapshots.size() < 2) throw std::invalid_argument("phase speed needs at least two snapshots");

  std::vector<double> phase;
  phase.reserve(snapshots.size());
  for (const auto& snap : snapshots) {
    if (snap.eta.size() != static_cast<std::size_t>(grid.n_cells()))
      throw std::invalid_argument("snapshot size does not match grid");
    std::complex<double> c{0.0, 0.0};
    for (int i = 0; i < grid.n_cells(); ++i)
      c += snap.eta[static_cast<std::size_t>(i)] * std::polar(1.0, -k * grid.x(i));
    double p = std::arg(c);
    if (!phase.empty()) {
      double d = p - phase.back();
      d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
      p = phase.back() + d;
    }
    phase.push_back(p);
  }
  // least-squares slope of phase against time
  const double m = static_cast<double>(phase.size());
  double st = 0.0, sp = 0.0;
  for (std::size_t i = 0; i < phase.size(); ++i) {
    st += snapshots[i].t;
    sp += phase[i];
  }
  const double tm = st / m, pm = sp / m;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phase.size(); ++i) {
    const double dt = snapshots[i].t - tm;
    num += dt * (phase[i] - pm);
    den += dt * dt;
  }
  if (!(den > 0.0)) throw std::invalid_argument("snapshots must span a positive time interval");
  return -(num / den) / k;
}

double analytic_phase_speed(ModelTier tier, double g, double H0, double k) {
  const double c0 = std::sqrt(g * H0);
  if (!is_dispersive(tier)) return c0;
  return c0 / std::sqrt(1.0 + k * k * H0 * H0 / 3.0);
}

DispersionResult run_dispersion_case(ModelTier tier, double H0, double k, int n_cells,
                                     Reconstruction reconstruction) {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (!(H0 > 0.0)) throw std::invalid_argument("depth H0 must be positive");
  const double length = 2.0 * kPi / k;
  Problem problem{Grid(0.0, length, n_cells, Boundary::Periodic), BathymetryField::flat(-H0), {},
                  tier, {}};
  problem.params.nu = 0.0;
  problem.scheme.reconstruction = reconstruction;

  DispersionResult result;
  result.k = k;
  result.c_analytic = analytic_phase_speed(tier, problem.params.g, H0, k);
  const double amplitude = 1e-4 * H0;

  FlowState s = FlowState::at_rest(problem.grid);
  for (int i = 0; i < n_cells; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double eta = amplitude * std::cos(k * problem.grid.x(i));
    s.H[ii] = H0 + eta;
    s.q[ii] = s.H[ii] * result.c_analytic * eta / H0;
  }

  StepControls controls;
  controls.t_end = length / result.c_analytic;
  std::vector<SurfaceSnapshot> snaps;
  auto record = [&](const FlowState& st) {
    snaps.push_back({st.t, free_surface(st, problem.bathy, problem.grid)});
  };
  record(s);
  integrate(problem, s, controls, [&](const FlowState& st, int, double) { record(st); });

  result.c_measured = measure_dispersion(snaps, problem.grid, k);
  result.relative_error = std::abs(result.c_measured - result.c_analytic) / result.c_analytic;
  return result;
}

// ---------------------------------------------------------------------------

ManufacturedSolution ManufacturedSolution::from_id(const std::string& id) {
  ManufacturedSolution m;
  if (id == "hydrostatic" || id == "Hydrostatic") return m;
  if (id == "nonhydro1" || id == "NonHydro1") {
    m.dispersive = true;
    return m;
  }
  throw std::invalid_argument("unknown manufactured solution '" + id +
                              "' (expected hydrostatic or nonhydro1)");
}

double ManufacturedSolution::H(double x, double t) const {
  return H0 + alpha * std::sin(k * (x - c * t));
}

double ManufacturedSolution::u(double x, double t) const {
  return U0 + beta * std::cos(k * (x - c * t));
}

std::array<double, 2> ManufacturedSolution::source(double x, double t) const {
  const double th = k * (x - c * t);
  const double sn = std::sin(th), cs = std::cos(th);
  const double h = H0 + alpha * sn;
  const double h_x = alpha * k * cs;
  const double h_t = -c * h_x;
  const double v = U0 + beta * cs;
  const double v_x = -beta * k * sn;
  const double v_t = -c * v_x;
  const double v_xx = -beta * k * k * cs;
  const double q_t = h_t * v + h * v_t;

  const double s_h = h_t + h_x * v + h * v_x;
  double s_q = q_t + h_x * v * v + 2.0 * h * v * v_x + g * h * h_x - 4.0 * nu * (h_x * v_x + h * v_xx);
  if (dispersive) {
    const double v_xxt = -beta * k * k * k * c * sn;
    s_q += z_b * z_b * z_b / 3.0 * v_xxt;
  }
  return {s_h, s_q};
}

Grid ManufacturedSolution::grid(int n_cells) const {
  return Grid(0.0, 2.0 * kPi / k, n_cells, Boundary::Periodic);
}

PhysicalParams ManufacturedSolution::params() const {
  PhysicalParams p;
  p.g = g;
  p.nu = nu;
  p.k_l = 0.0;
  p.k_t = 0.0;
  return p;
}

FlowState ManufacturedSolution::state(const Grid& grid, double t) const {
  FlowState s = FlowState::at_rest(grid, t);
  for (int i = 0; i < grid.n_cells(); ++i) {
    s.H[static_cast<std::size_t>(i)] = H(grid.x(i), t);
    s.q[static_cast<std::size_t>(i)] = q(grid.x(i), t);
  }
  return s;
}

std::string to_string(ConvergenceScenario s) {
  switch (s) {
    case ConvergenceScenario::ManufacturedHydrostatic: return "manufactured-hydrostatic";
    case ConvergenceScenario::ManufacturedNonHydro1: return "manufactured-nonhydro1";
    case ConvergenceScenario::LakeAtRest: return "lake-at-rest";
    case ConvergenceScenario::LinearWaveNonHydro1: return "linear-wave-nonhydro1";
  }
  return "?";
}

ConvergenceScenario convergence_scenario_from_string(const std::string& s) {
  for (auto c : {ConvergenceScenario::ManufacturedHydrostatic,
                 ConvergenceScenario::ManufacturedNonHydro1, ConvergenceScenario::LakeAtRest,
                 ConvergenceScenario::LinearWaveNonHydro1})
    if (s == to_string(c)) return c;
  throw std::invalid_argument(
      "unknown scenario '" + s +
      "' (expected manufactured-hydrostatic, manufactured-nonhydro1, lake-at-rest or "
      "linear-wave-nonhydro1)");
}

std::optional<double> ConvergenceTable::finest_order() const {
  if (rows.empty()) return std::nullopt;
  return rows.back().order;
}

namespace {

double l2_error(const FlowState& s, const Grid& grid, const std::vector<double>& H_ref,
                const std::vector<double>& q_ref) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dh = s.H[i] - H_ref[i];
    const double dq = s.q[i] - q_ref[i];
    sum += (dh * dh + dq * dq) * grid.dx();
  }
  return std::sqrt(sum);
}

double domain_length(ConvergenceScenario scenario) {
  switch (scenario) {
    case ConvergenceScenario::ManufacturedHydrostatic:
    case ConvergenceScenario::ManufacturedNonHydro1:
      return ManufacturedSolution{}.grid(Grid::kMinCells).length();
    case ConvergenceScenario::LakeAtRest:
      return 10.0;
    case ConvergenceScenario::LinearWaveNonHydro1:
      return 2.0 * kPi;
  }
  return 1.0;
}

double run_scenario(ConvergenceScenario scenario, int cells, const ConvergenceSettings& settings) {
  StepControls controls;
  controls.cfl = settings.cfl;
  switch (scenario) {
    case ConvergenceScenario::ManufacturedHydrostatic:
    case ConvergenceScenario::ManufacturedNonHydro1: {
      ManufacturedSolution m = ManufacturedSolution::from_id(
          scenario == ConvergenceScenario::ManufacturedHydrostatic ? "hydrostatic" : "nonhydro1");
      Problem problem{m.grid(cells), m.bathymetry(), m.params(), m.tier(), {}};
      problem.scheme.reconstruction = settings.reconstruction;
      problem.scheme.source = [m](double x, double t) { return m.source(x, t); };
      controls.t_end = settings.t_end.value_or(0.5);
      const RunSummary run = integrate(problem, m.state(problem.grid, 0.0), controls);
      const FlowState ref = m.state(problem.grid, run.final_state.t);
      return l2_error(run.final_state, problem.grid, ref.H, ref.q);
    }
    case ConvergenceScenario::LakeAtRest: {
      Problem problem{Grid(0.0, 10.0, cells, Boundary::Periodic),
                      BathymetryField(GaussianBumpProfile{5.0, 1.0, 0.3, -1.0}), {},
                      ModelTier::Hydrostatic, {}};
      problem.scheme.reconstruction = settings.reconstruction;
      FlowState s = FlowState::at_rest(problem.grid);
      s.H = heights_from_surface(std::vector<double>(static_cast<std::size_t>(cells), 0.0),
                                 problem.bathy, problem.grid, 0.0);
      controls.t_end = settings.t_end.value_or(0.5);
      const RunSummary run = integrate(problem, s, controls);
      return l2_error(run.final_state, problem.grid, s.H, s.q);
    }
    case ConvergenceScenario::LinearWaveNonHydro1: {
      const double H0 = 1.0, k = 1.0, amplitude = 1e-6;
      Problem problem{Grid(0.0, 2.0 * kPi / k, cells, Boundary::Periodic),
                      BathymetryField::flat(-H0), {}, ModelTier::NonHydro1, {}};
      problem.params.nu = 0.0;
      problem.scheme.reconstruction = settings.reconstruction;
      const double c = analytic_phase_speed(ModelTier::NonHydro1, problem.params.g, H0, k);
      auto exact = [&](double t, std::vector<double>& H, std::vector<double>& q) {
        H.resize(static_cast<std::size_t>(cells));
        q.resize(static_cast<std::size_t>(cells));
        for (int i = 0; i < cells; ++i) {
          const double eta = amplitude * std::cos(k * (problem.grid.x(i) - c * t));
          H[static_cast<std::size_t>(i)] = H0 + eta;
          q[static_cast<std::size_t>(i)] = c * eta;
        }
      };
      FlowState s = FlowState::at_rest(problem.grid);
      exact(0.0, s.H, s.q);
      controls.t_end = settings.t_end.value_or(kPi / (k * c));
      const RunSummary run = integrate(problem, s, controls);
      std::vector<double> H_ref, q_ref;
      exact(run.final_state.t, H_ref, q_ref);
      return l2_error(run.final_state, problem.grid, H_ref, q_ref);
    }
  }
  return 0.0;
}

}  // namespace

ConvergenceTable convergence_study(ConvergenceScenario scenario, const std::vector<int>& grids,
                                   const ConvergenceSettings& settings) {
  if (grids.empty()) throw std::invalid_argument("convergence study needs at least one grid");
  ConvergenceTable table;
  table.scenario = scenario;
  table.exact = true;
  for (int cells : grids) {
    ConvergenceRow row;
    row.cells = cells;
    row.dx = domain_length(scenario) / cells;
    row.error = run_scenario(scenario, cells, settings);
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      if (row.error > 0.0 && prev.error > 0.0)
        row.order = std::log(prev.error / row.error) / std::log(static_cast<double>(cells) / prev.cells);
      if (!(row.error < prev.error)) table.monotone = false;
    }
    if (row.error > 1e-13) table.exact = false;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace nhsw
