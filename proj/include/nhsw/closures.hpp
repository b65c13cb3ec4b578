#pragma once

#include "nhsw/core.hpp"
#include "nhsw/tier.hpp"

namespace nhsw {

/// One z-resolved sample of a water column.
struct VerticalSample {
  double z = 0.0;
  double u = 0.0;
  double w = 0.0;
  double p = 0.0;  // pressure divided by density
};

/// Local values and derivatives of one water column. Everything a pointwise
/// closure needs; x-derivatives are supplied by the caller.
struct ColumnState {
  double H = 0.0;
  double z_b = 0.0;
  double u_bar = 0.0;
  double du_dx = 0.0;
  double d2u_dx2 = 0.0;
  double dzb_dx = 0.0;
  double d2zb_dx2 = 0.0;
  double dzb_dt = 0.0;
  double d2zb_dt2 = 0.0;
  double d2zb_dxdt = 0.0;
  double deta_dx = 0.0;
  double deta_dt = 0.0;
  double accel = 0.0;     // a = du_bar/dt from the implicit solve
  double daccel_dx = 0.0;
  double p_atm = 0.0;
  double g = 9.81;
  double nu = 0.0;

  double eta() const { return z_b + H; }
  /// d(z_b u_bar)/dx
  double dzbu_dx() const { return dzb_dx * u_bar + z_b * du_dx; }
};

// --- friction ---------------------------------------------------------------

/// Wall-law coefficient kappa = k_l + k_t H |v_b| with the bottom velocity
/// estimated from the laminar part only:
/// |v_b| = |u_bar| sqrt(1 + (dz_b/dx)^2) / (1 + k_l H / (3 nu)).
double friction_kappa(double u_bar, double dzb_dx, double H, const PhysicalParams& params);

/// kappa / (1 + kappa H / (3 nu)). Requires nu > 0.
double effective_friction(double kappa, double H, double nu);

/// Energy-weighted factor 1 + 2 kappa^2 H^2 / (15 nu^2) used for the modified
/// water height of the second dispersive model.
double modified_height_factor(double kappa, double H, double nu);

// --- velocity ---------------------------------------------------------------

/// Parabolic profile u(z) = u_bar (1 + (kappa/nu)(z_rel - z_rel^2/(2H) - H/3)),
/// whose depth average is exactly u_bar. z_rel is the height above the bottom.
double velocity_profile(double u_bar, double H, double kappa, double nu, double z_rel);

/// w(z) = dz_b/dt - z du/dx + d(z_b u)/dx, affine in z.
double vertical_velocity(double u_bar, double du_bar_dx, double z_b, double dzb_dx, double dzb_dt,
                         double z);
double vertical_velocity(const ColumnState& col, double z);

/// Closed form of H * mean(w^2) = integral of w^2 over [z_b, eta].
double column_w2_integral(const ColumnState& col);

// --- pressure ---------------------------------------------------------------

/// p_h(z) = p^a + g (eta - z) - 2 nu du_bar/dx.
double pressure_hydrostatic(const ColumnState& col, double z);

/// Non-hydrostatic pressure at elevation z. NonHydro1 and PeregrineInviscid add
/// the vertical-acceleration correction; NonHydro2 additionally keeps the
/// quadratic u w / w^2 terms. Throws std::invalid_argument for Hydrostatic.
double pressure_nonhydrostatic(const ColumnState& col, double z, ModelTier tier);

/// Integral over the column of p - p_h for the NonHydro2 pressure.
double nonhydro2_excess_integral(const ColumnState& col);
/// (p - p_h) at the bottom for the NonHydro2 pressure.
double nonhydro2_excess_bottom(const ColumnState& col);

VerticalSample sample_column(const ColumnState& col, double z, double kappa, ModelTier tier);

}  // namespace nhsw
