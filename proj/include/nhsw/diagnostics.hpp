#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nhsw/closures.hpp"
#include "nhsw/core.hpp"
#include "nhsw/solver.hpp"
#include "nhsw/tier.hpp"

namespace nhsw {

/// Per-cell column data (centred derivatives, d eta/dt from the mass balance)
/// for the pointwise closures. accel may be empty.
std::vector<ColumnState> column_states(const FlowState& state, const BathymetryField& bathy,
                                       const PhysicalParams& params, const Grid& grid,
                                       const std::vector<double>& accel = {});

struct EnergyReport {
  double t = 0.0;
  double mass = 0.0;      // sum H dx
  double momentum = 0.0;  // sum q dx
  double E_h = 0.0;       // sum (H u^2/2 + g H (eta + z_b)/2 + H p^a) dx
  double E_ext = 0.0;     // tier energy; equals E_h for Hydrostatic
  double modeled_rate = 0.0;     // right-hand side of the tier's energy equality
  double indefinite_rate = 0.0;  // NonHydro2 slope/surface cross term, part of modeled_rate
  double dissipation_rate = 0.0; // measured dE/dt, filled in by EnergyTracker
  double budget_residual = 0.0;  // |measured - modeled|, filled in by EnergyTracker
};

/// Hydrostatic energy and its modeled rate
/// sum [-H dp^a/dt - 4 nu H (du/dx)^2 - kappa_eff u^2 + g H dz_b/dt] dx.
EnergyReport energy_hydro(const FlowState& state, const BathymetryField& bathy,
                          const PhysicalParams& params, const Grid& grid);

/// Extended energy of a dispersive tier (adds the vertical kinetic energy and,
/// for NonHydro2, the modified-height correction). accel is du_bar/dt from the
/// last solve; it only matters under bottom motion and defaults to zero.
/// Throws std::invalid_argument for the Hydrostatic tier.
EnergyReport energy_extended(const FlowState& state, const BathymetryField& bathy,
                             const PhysicalParams& params, const Grid& grid, ModelTier tier,
                             const std::vector<double>& accel = {});

/// Records energy reports step by step and fills in the measured rate
/// (E_{n+1} - E_n)/dt and the residual against the time-averaged modeled rate.
/// The tracked energy is E_h for Hydrostatic and E_ext otherwise.
class EnergyTracker {
 public:
  explicit EnergyTracker(const Problem& problem);
  const EnergyReport& record(const FlowState& state, const std::vector<double>& accel = {});
  const std::vector<EnergyReport>& reports() const { return reports_; }

 private:
  const Problem* problem_;
  std::vector<EnergyReport> reports_;
};

/// Free surface at one instant.
struct SurfaceSnapshot {
  double t = 0.0;
  std::vector<double> eta;
};

/// Phase speed of the Fourier mode k in a sequence of snapshots: the mode's
/// phase is unwrapped in time and fitted by least squares, c = -dphi/dt / k.
/// Throws std::invalid_argument for k <= 0, fewer than 16 cells per
/// wavelength or fewer than two snapshots.
double measure_dispersion(const std::vector<SurfaceSnapshot>& snapshots, const Grid& grid, double k);

/// Linear phase speed on a flat bottom of depth H0: sqrt(g H0) for
/// Hydrostatic, sqrt(g H0) / sqrt(1 + (k H0)^2/3) for the dispersive tiers.
double analytic_phase_speed(ModelTier tier, double g, double H0, double k);

struct DispersionResult {
  double k = 0.0;
  double c_measured = 0.0;
  double c_analytic = 0.0;
  double relative_error = 0.0;
};

/// Runs a small right-going monochromatic wave (amplitude 1e-4 H0) over one
/// wavelength with n_cells cells for one period and measures its phase speed.
DispersionResult run_dispersion_case(ModelTier tier, double H0, double k, int n_cells,
                                     Reconstruction reconstruction = Reconstruction::VanLeer);

/// Smooth periodic travelling fields on a flat bottom z_b = -1 with the
/// forcing that makes them exact solutions of the Hydrostatic or NonHydro1
/// equations:
///   H = H0 + alpha sin(theta), u = U0 + beta cos(theta), theta = k (x - c t).
struct ManufacturedSolution {
  bool dispersive = false;
  double H0 = 1.0, alpha = 0.1, U0 = 0.25, beta = 0.1;
  double k = 1.0, c = 1.0;
  double g = 9.81, nu = 0.01, z_b = -1.0;

  static ManufacturedSolution from_id(const std::string& id);

  double H(double x, double t) const;
  double u(double x, double t) const;
  double q(double x, double t) const { return H(x, t) * u(x, t); }
  /// (S_H, S_q) to be added to the mass and momentum tendencies.
  std::array<double, 2> source(double x, double t) const;

  ModelTier tier() const { return dispersive ? ModelTier::NonHydro1 : ModelTier::Hydrostatic; }
  Grid grid(int n_cells) const;
  BathymetryField bathymetry() const { return BathymetryField::flat(z_b); }
  PhysicalParams params() const;
  FlowState state(const Grid& grid, double t) const;
};

enum class ConvergenceScenario {
  ManufacturedHydrostatic,
  ManufacturedNonHydro1,
  LakeAtRest,
  LinearWaveNonHydro1
};

std::string to_string(ConvergenceScenario s);
ConvergenceScenario convergence_scenario_from_string(const std::string& s);

struct ConvergenceRow {
  int cells = 0;
  double dx = 0.0;
  double error = 0.0;
  std::optional<double> order;  // log2(e_coarse / e_fine) against the previous row
};

struct ConvergenceTable {
  ConvergenceScenario scenario = ConvergenceScenario::ManufacturedHydrostatic;
  std::vector<ConvergenceRow> rows;
  bool exact = false;     // every error at round-off level (<= 1e-13)
  bool monotone = true;   // errors decrease with refinement
  std::optional<double> finest_order() const;
};

struct ConvergenceSettings {
  Reconstruction reconstruction = Reconstruction::VanLeer;
  double cfl = 0.4;
  std::optional<double> t_end;  // scenario default when unset
};

/// Runs the scenario on each grid and reports the L2 error of (H, q) against
/// the reference with the observed orders. Non-monotone errors are flagged,
/// not fatal.
ConvergenceTable convergence_study(ConvergenceScenario scenario, const std::vector<int>& grids,
                                   const ConvergenceSettings& settings = {});

}  // namespace nhsw
