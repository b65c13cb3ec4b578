#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nhsw/banded.hpp"
#include "nhsw/core.hpp"
#include "nhsw/tier.hpp"

namespace nhsw {

enum class Reconstruction { FirstOrder, Minmod, VanLeer };

/// Extra volumetric forcing (S_H, S_q) at (x, t), used by manufactured
/// solutions.
using SourceFunction = std::function<std::array<double, 2>(double x, double t)>;

struct SchemeOptions {
  Reconstruction reconstruction = Reconstruction::VanLeer;
  SourceFunction source;
  bool check_dominance = false;  // throw if an assembled operator is not diagonally dominant
};

struct HydrostaticTendency {
  std::vector<double> dH;
  std::vector<double> dq;           // full momentum tendency, drag included
  std::vector<double> dq_explicit;  // everything except the drag
  std::vector<double> drag;         // D_i >= 0, the drag term is -D_i * u_bar_i
  int clamped = 0;                  // negative reconstructed heights set to zero
};

/// Finite-volume tendency of the viscous Saint-Venant system: Rusanov flux
/// with hydrostatic reconstruction, viscous flux on staggered faces, analytic
/// atmospheric pressure gradient and effective wall friction.
HydrostaticTendency hydrostatic_tendency(const FlowState& state, const BathymetryField& bathy,
                                         const PhysicalParams& params, const Grid& grid,
                                         const SchemeOptions& options = {});

/// Implicit system A a = F for a = du_bar/dt. F excludes the drag -D u_bar,
/// which the solver integrates implicitly through the same operator.
struct DispersiveSystem {
  BandedMatrix A;
  std::vector<double> F;
  std::vector<double> dH;  // mass tendency
  std::vector<double> drag;
  int clamped = 0;
};

/// Throws std::invalid_argument for the Hydrostatic tier.
DispersiveSystem assemble_dispersive(const FlowState& state, const BathymetryField& bathy,
                                     const PhysicalParams& params, const Grid& grid,
                                     ModelTier tier, const SchemeOptions& options = {});

/// Left-hand operator acting on a. Hydrostatic gives diag(H); dry rows are
/// identity rows.
BandedMatrix dispersive_operator(const FlowState& state, const BathymetryField& bathy,
                                 const Grid& grid, ModelTier tier);

/// Drag coefficient D_i per cell: kappa_eff, times 1 + 5/2 (dz_b/dx)^2 for the
/// dispersive tiers, zero in dry cells and for PeregrineInviscid.
std::vector<double> drag_coefficients(const FlowState& state, const BathymetryField& bathy,
                                      const PhysicalParams& params, const Grid& grid,
                                      ModelTier tier);

/// Friction-gradient source terms that the dispersive tiers add on top of the
/// drag (zero for Hydrostatic and PeregrineInviscid).
std::vector<double> friction_sources(const FlowState& state, const BathymetryField& bathy,
                                     const PhysicalParams& params, const Grid& grid,
                                     ModelTier tier);

struct SteadyResidual {
  std::vector<double> mass;
  std::vector<double> momentum;  // drag included
};

/// Spatial residual of the tier with every time derivative set to zero.
SteadyResidual steady_residual(const FlowState& state, const BathymetryField& bathy,
                               const PhysicalParams& params, const Grid& grid, ModelTier tier,
                               const SchemeOptions& options = {});

/// Value of a cell field at index j, which may lie outside [0, n): periodic
/// wrap, wall mirror (sign flip when odd) or zeroth-order copy.
double ghost_value(const std::vector<double>& v, int j, const Grid& grid, bool odd = false);

/// Centred first derivative of a cell field using the same ghost rules.
std::vector<double> centered_derivative(const std::vector<double>& v, const Grid& grid,
                                        bool odd = false);

/// Parameters the tier actually uses: PeregrineInviscid has nu = k_l = k_t = 0.
PhysicalParams effective_params(const PhysicalParams& params, ModelTier tier);

}  // namespace nhsw
