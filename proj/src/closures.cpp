#include "nhsw/closures.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace nhsw {

std::string to_string(ModelTier tier) {
  switch (tier) {
    case ModelTier::Hydrostatic: return "Hydrostatic";
    case ModelTier::NonHydro1: return "NonHydro1";
    case ModelTier::NonHydro2: return "NonHydro2";
    case ModelTier::PeregrineInviscid: return "PeregrineInviscid";
  }
  return "?";
}

ModelTier tier_from_string(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "hydrostatic") return ModelTier::Hydrostatic;
  if (lower == "nonhydro1") return ModelTier::NonHydro1;
  if (lower == "nonhydro2") return ModelTier::NonHydro2;
  if (lower == "peregrineinviscid" || lower == "peregrine") return ModelTier::PeregrineInviscid;
  throw std::invalid_argument("unknown tier '" + name +
                              "' (expected Hydrostatic, NonHydro1, NonHydro2 or PeregrineInviscid)");
}

double friction_kappa(double u_bar, double dzb_dx, double H, const PhysicalParams& params) {
  if (params.k_t == 0.0 || H <= 0.0) return params.k_l;
  double denom = 1.0;
  if (params.k_l > 0.0) {
    if (params.nu <= 0.0) return params.k_l;  // laminar layer pins the bottom velocity to zero
    denom += params.k_l * H / (3.0 * params.nu);
  }
  const double v_b = std::abs(u_bar) * std::sqrt(1.0 + dzb_dx * dzb_dx) / denom;
  return params.k_l + params.k_t * H * v_b;
}

double effective_friction(double kappa, double H, double nu) {
  if (kappa == 0.0) return 0.0;
  if (!(nu > 0.0)) throw std::invalid_argument("friction closure requires nu>0");
  return kappa / (1.0 + kappa * H / (3.0 * nu));
}

double modified_height_factor(double kappa, double H, double nu) {
  if (kappa == 0.0) return 1.0;
  if (!(nu > 0.0)) throw std::invalid_argument("friction closure requires nu>0");
  const double r = kappa * H / nu;
  return 1.0 + 2.0 * r * r / 15.0;
}

double velocity_profile(double u_bar, double H, double kappa, double nu, double z_rel) {
  if (H <= 0.0 || kappa == 0.0) return u_bar;
  if (!(nu > 0.0)) throw std::invalid_argument("velocity profile requires nu>0");
  return u_bar * (1.0 + kappa / nu * (z_rel - z_rel * z_rel / (2.0 * H) - H / 3.0));
}

double vertical_velocity(double u_bar, double du_bar_dx, double z_b, double dzb_dx, double dzb_dt,
                         double z) {
  return dzb_dt - z * du_bar_dx + z_b * du_bar_dx + u_bar * dzb_dx;
}

double vertical_velocity(const ColumnState& col, double z) {
  return vertical_velocity(col.u_bar, col.du_dx, col.z_b, col.dzb_dx, col.dzb_dt, z);
}

double column_w2_integral(const ColumnState& col) {
  // w = W0 - z b with W0 = dz_b/dt + d(z_b u)/dx and b = du/dx, integrated
  // exactly over [z_b, eta].
  const double eta = col.eta();
  const double zb = col.z_b;
  const double H = col.H;
  const double b = col.du_dx;
  const double c = col.dzbu_dx();
  const double st = col.dzb_dt;
  return H * ((eta * eta + eta * zb + zb * zb) / 3.0 * b * b - (eta + zb) * b * c + c * c) +
         H * st * st + 2.0 * st * (-(eta * eta - zb * zb) / 2.0 * b + H * c);
}

double pressure_hydrostatic(const ColumnState& col, double z) {
  return col.p_atm + col.g * (col.eta() - z) - 2.0 * col.nu * col.du_dx;
}

namespace {

// Pieces of p - p_h shared by both dispersive pressures. The depth structure
// is spanned by (eta - z) and (eta^2 - z^2)/2.
struct ExcessCoefficients {
  double linear = 0.0;     // multiplies (eta - z)
  double quadratic = 0.0;  // multiplies (eta^2 - z^2)/2
  double constant = 0.0;   // z-independent
};

double d_ubar_dzbdt_dx(const ColumnState& col) {
  return col.du_dx * col.dzb_dt + col.u_bar * col.d2zb_dxdt;
}

double d_zba_dx(const ColumnState& col) { return col.dzb_dx * col.accel + col.z_b * col.daccel_dx; }

// d/dt of the vertical acceleration integral, with u replaced by u_bar.
ExcessCoefficients nonhydro1_coefficients(const ColumnState& col) {
  const double eta = col.eta();
  ExcessCoefficients k;
  k.linear = col.d2zb_dt2 + d_zba_dx(col) + d_ubar_dzbdt_dx(col);
  k.quadratic = -col.daccel_dx;
  k.constant = -col.deta_dt * (eta * col.du_dx - col.dzbu_dx());
  return k;
}

ExcessCoefficients nonhydro2_coefficients(const ColumnState& col) {
  const double eta = col.eta();
  const double w0 = col.dzb_dt + col.dzbu_dx();
  const double w0_x = col.d2zb_dxdt + col.d2zb_dx2 * col.u_bar + 2.0 * col.dzb_dx * col.du_dx +
                      col.z_b * col.d2u_dx2;
  const double uw0_x = col.du_dx * w0 + col.u_bar * w0_x;
  const double uux_x = col.du_dx * col.du_dx + col.u_bar * col.d2u_dx2;
  const double w_surface = w0 - eta * col.du_dx;

  ExcessCoefficients k;
  // d/dt int_z^eta w
  k.linear = col.d2zb_dt2 + d_zba_dx(col) + d_ubar_dzbdt_dx(col);
  k.quadratic = -col.daccel_dx;
  k.constant = col.deta_dt * w_surface;
  // d/dx int_z^eta u w, including the moving upper limit
  k.linear += uw0_x;
  k.quadratic += -uux_x;
  k.constant += col.u_bar * w0 * col.deta_dx - col.u_bar * col.du_dx * eta * col.deta_dx;
  return k;
}

double evaluate(const ExcessCoefficients& k, const ColumnState& col, double z) {
  const double eta = col.eta();
  return k.linear * (eta - z) + k.quadratic * (eta * eta - z * z) / 2.0 + k.constant;
}

}  // namespace

double pressure_nonhydrostatic(const ColumnState& col, double z, ModelTier tier) {
  const double p_h = pressure_hydrostatic(col, z);
  switch (tier) {
    case ModelTier::Hydrostatic:
      throw std::invalid_argument("pressure_nonhydrostatic requires a dispersive tier");
    case ModelTier::NonHydro1:
    case ModelTier::PeregrineInviscid:
      return p_h + evaluate(nonhydro1_coefficients(col), col, z);
    case ModelTier::NonHydro2: {
      const double w = vertical_velocity(col, z);
      return p_h + evaluate(nonhydro2_coefficients(col), col, z) - w * w;
    }
  }
  return p_h;
}

double nonhydro2_excess_integral(const ColumnState& col) {
  const ExcessCoefficients k = nonhydro2_coefficients(col);
  const double H = col.H;
  const double int_linear = H * H / 2.0;
  const double int_quadratic = H * H * (2.0 * col.eta() + col.z_b) / 6.0;
  return k.linear * int_linear + k.quadratic * int_quadratic + k.constant * H -
         column_w2_integral(col);
}

double nonhydro2_excess_bottom(const ColumnState& col) {
  const double w_b = vertical_velocity(col, col.z_b);
  return evaluate(nonhydro2_coefficients(col), col, col.z_b) - w_b * w_b;
}

VerticalSample sample_column(const ColumnState& col, double z, double kappa, ModelTier tier) {
  VerticalSample s;
  s.z = z;
  const double z_rel = z - col.z_b;
  const bool inviscid = tier == ModelTier::PeregrineInviscid;
  s.u = inviscid ? col.u_bar : velocity_profile(col.u_bar, col.H, kappa, col.nu, z_rel);
  s.w = vertical_velocity(col, z);
  s.p = tier == ModelTier::Hydrostatic ? pressure_hydrostatic(col, z)
                                        : pressure_nonhydrostatic(col, z, tier);
  return s;
}

}  // namespace nhsw
