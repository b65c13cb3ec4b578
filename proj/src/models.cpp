#include "nhsw/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nhsw/closures.hpp"

namespace nhsw {

namespace {

constexpr int kGhosts = 3;

struct GhostMap {
  int index;
  double sign;  // applied to fields that are odd under a wall mirror
};

GhostMap map_index(int j, int n, Boundary b) {
  if (j >= 0 && j < n) return {j, 1.0};
  switch (b) {
    case Boundary::Periodic: {
      int m = j % n;
      if (m < 0) m += n;
      return {m, 1.0};
    }
    case Boundary::Wall:
      return {j < 0 ? -1 - j : 2 * n - 1 - j, -1.0};
    case Boundary::Copy:
      return {j < 0 ? 0 : n - 1, 1.0};
  }
  return {0, 1.0};
}

// Cell values padded with ghost cells. Index i in [-kGhosts, n + kGhosts).
struct Columns {
  int n = 0;
  double dx = 0.0;
  double t = 0.0;
  double g = 9.81;
  double nu = 0.0;
  Boundary boundary = Boundary::Periodic;
  std::vector<double> x, H, u, z, eta, s, zxx, zt, ztt, zxt, zxtt, kappa, pa;

  static double at(const std::vector<double>& v, int i) {
    return v[static_cast<std::size_t>(i + kGhosts)];
  }
  double h(int i) const { return at(H, i); }
  bool wet(int i) const { return h(i) >= kDryThreshold; }
  double ux(int i) const { return (at(u, i + 1) - at(u, i - 1)) / (2.0 * dx); }
  double uxx(int i) const { return (at(u, i + 1) - 2.0 * at(u, i) + at(u, i - 1)) / (dx * dx); }
  double eta_x(int i) const { return (at(eta, i + 1) - at(eta, i - 1)) / (2.0 * dx); }
  double hx(int i) const { return (at(H, i + 1) - at(H, i - 1)) / (2.0 * dx); }
};

Columns build_columns(const FlowState& state, const BathymetryField& bathy,
                      const PhysicalParams& params, const Grid& grid, bool steady) {
  state.validate(grid);
  Columns c;
  c.n = grid.n_cells();
  c.dx = grid.dx();
  c.t = state.t;
  c.g = params.g;
  c.nu = params.nu;
  c.boundary = grid.boundary();
  const auto m = static_cast<std::size_t>(c.n + 2 * kGhosts);
  for (auto* v : {&c.x, &c.H, &c.u, &c.z, &c.eta, &c.s, &c.zxx, &c.zt, &c.ztt, &c.zxt, &c.zxtt,
                  &c.kappa, &c.pa})
    v->assign(m, 0.0);

  const double t = state.t;
  for (int i = 0; i < c.n; ++i) {
    const auto k = static_cast<std::size_t>(i + kGhosts);
    const auto ui = static_cast<std::size_t>(i);
    const double x = grid.x(i);
    c.x[k] = x;
    c.H[k] = state.H[ui];
    c.u[k] = state.velocity(ui);
    c.z[k] = bathy.z(x, t);
    c.s[k] = bathy.dz_dx(x, t);
    c.zxx[k] = bathy.d2z_dx2(x, t);
    if (!steady) {
      c.zt[k] = bathy.dz_dt(x, t);
      c.ztt[k] = bathy.d2z_dt2(x, t);
      c.zxt[k] = bathy.d2z_dxdt(x, t);
      c.zxtt[k] = bathy.d3z_dxdt2(x, t);
    }
    c.pa[k] = pressure_value(params.p_atm, x, t);
    c.kappa[k] = state.wet(ui) ? friction_kappa(c.u[k], c.s[k], c.H[k], params) : 0.0;
  }
  for (int j = -kGhosts; j < c.n + kGhosts; ++j) {
    if (j >= 0 && j < c.n) continue;
    const GhostMap gm = map_index(j, c.n, c.boundary);
    const auto k = static_cast<std::size_t>(j + kGhosts);
    const auto src = static_cast<std::size_t>(gm.index + kGhosts);
    c.x[k] = grid.x(j);
    c.H[k] = c.H[src];
    c.u[k] = gm.sign * c.u[src];
    c.z[k] = c.z[src];
    c.s[k] = gm.sign * c.s[src];
    c.zxx[k] = c.zxx[src];
    c.zt[k] = c.zt[src];
    c.ztt[k] = c.ztt[src];
    c.zxt[k] = gm.sign * c.zxt[src];
    c.zxtt[k] = gm.sign * c.zxtt[src];
    c.pa[k] = c.pa[src];
    c.kappa[k] = c.kappa[src];
  }
  for (std::size_t k = 0; k < m; ++k) c.eta[k] = c.z[k] + c.H[k];
  return c;
}

// Pads an interior array with ghost values (even under a wall mirror).
std::vector<double> extend(const std::vector<double>& v, int n, Boundary b) {
  std::vector<double> e(static_cast<std::size_t>(n + 2 * kGhosts));
  for (int j = -kGhosts; j < n + kGhosts; ++j)
    e[static_cast<std::size_t>(j + kGhosts)] = v[static_cast<std::size_t>(map_index(j, n, b).index)];
  return e;
}

double limited_slope(double dm, double dp, Reconstruction r) {
  if (r == Reconstruction::FirstOrder || dm * dp <= 0.0) return 0.0;
  if (r == Reconstruction::Minmod) return dm > 0.0 ? std::min(dm, dp) : std::max(dm, dp);
  return 2.0 * dm * dp / (dm + dp);
}

struct FaceValues {
  double H_minus, H_plus;  // left and right face of the cell
  double z_minus, z_plus;
  double u_minus, u_plus;
};

FaceValues reconstruct(const Columns& c, int i, Reconstruction r) {
  FaceValues f{};
  const double H = c.h(i);
  const double eta = Columns::at(c.eta, i);
  const double u = Columns::at(c.u, i);
  double sH = 0.0, se = 0.0, su = 0.0;
  if (c.wet(i - 1) && c.wet(i) && c.wet(i + 1)) {
    sH = limited_slope(H - c.h(i - 1), c.h(i + 1) - H, r);
    se = limited_slope(eta - Columns::at(c.eta, i - 1), Columns::at(c.eta, i + 1) - eta, r);
    su = limited_slope(u - Columns::at(c.u, i - 1), Columns::at(c.u, i + 1) - u, r);
  }
  f.H_minus = H - 0.5 * sH;
  f.H_plus = H + 0.5 * sH;
  f.z_minus = eta - 0.5 * se - f.H_minus;
  f.z_plus = eta + 0.5 * se - f.H_plus;
  f.u_minus = u - 0.5 * su;
  f.u_plus = u + 0.5 * su;
  return f;
}

struct ExplicitPart {
  std::vector<double> RH;  // interior, source included
  std::vector<double> Rq;
  int clamped = 0;
};

ExplicitPart hydrostatic_part(const Columns& c, const PhysicalParams& params,
                              const SchemeOptions& options, bool with_source) {
  const int n = c.n;
  const double g = c.g;
  const double dx = c.dx;
  ExplicitPart out;
  out.RH.assign(static_cast<std::size_t>(n), 0.0);
  out.Rq.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<FaceValues> rec(static_cast<std::size_t>(n + 2));
  for (int i = -1; i <= n; ++i) {
    FaceValues f = reconstruct(c, i, options.reconstruction);
    if (f.H_minus < 0.0 || f.H_plus < 0.0) {
      ++out.clamped;
      f.H_minus = std::max(f.H_minus, 0.0);
      f.H_plus = std::max(f.H_plus, 0.0);
    }
    rec[static_cast<std::size_t>(i + 1)] = f;
  }
  auto rc = [&](int i) -> const FaceValues& { return rec[static_cast<std::size_t>(i + 1)]; };

  // Face k sits between cells k and k+1, k in [-1, n-1].
  std::vector<double> flux_H(static_cast<std::size_t>(n + 1));
  std::vector<double> flux_q_left(static_cast<std::size_t>(n + 1));   // seen by cell k
  std::vector<double> flux_q_right(static_cast<std::size_t>(n + 1));  // seen by cell k+1
  for (int k = -1; k < n; ++k) {
    const FaceValues& L = rc(k);
    const FaceValues& R = rc(k + 1);
    const double HL = L.H_plus, HR = R.H_minus;
    const double zL = L.z_plus, zR = R.z_minus;
    const double uL = HL >= kDryThreshold ? L.u_plus : 0.0;
    const double uR = HR >= kDryThreshold ? R.u_minus : 0.0;
    const double zs = std::max(zL, zR);
    const double HLs = std::max(0.0, HL + zL - zs);
    const double HRs = std::max(0.0, HR + zR - zs);
    const double qL = HLs * uL, qR = HRs * uR;
    const double a = std::max(std::abs(uL) + std::sqrt(g * HLs), std::abs(uR) + std::sqrt(g * HRs));
    const double fH = 0.5 * (qL + qR) - 0.5 * a * (HRs - HLs);
    const double fq = 0.5 * (qL * uL + 0.5 * g * HLs * HLs + qR * uR + 0.5 * g * HRs * HRs) -
                      0.5 * a * (qR - qL);
    const auto kk = static_cast<std::size_t>(k + 1);
    flux_H[kk] = fH;
    flux_q_left[kk] = fq + 0.5 * g * (HL * HL - HLs * HLs);
    flux_q_right[kk] = fq + 0.5 * g * (HR * HR - HRs * HRs);
  }

  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const FaceValues& f = rc(i);
    const double bed = -g * 0.5 * (f.H_minus + f.H_plus) * (f.z_plus - f.z_minus);
    out.RH[ii] = -(flux_H[ii + 1] - flux_H[ii]) / dx;
    double rq = -(flux_q_left[ii + 1] - flux_q_right[ii]) / dx + bed / dx;

    const double H = c.h(i);
    const double Hr = 0.5 * (H + c.h(i + 1));
    const double Hl = 0.5 * (H + c.h(i - 1));
    const double u = Columns::at(c.u, i);
    rq += 4.0 * c.nu * (Hr * (Columns::at(c.u, i + 1) - u) - Hl * (u - Columns::at(c.u, i - 1))) /
          (dx * dx);
    rq -= H * pressure_dx(params.p_atm, Columns::at(c.x, i), c.t);
    out.Rq[ii] = rq;

    if (with_source && options.source) {
      const auto src = options.source(Columns::at(c.x, i), c.t);
      out.RH[ii] += src[0];
      out.Rq[ii] += src[1];
    }
  }
  return out;
}

std::vector<double> drag_from_columns(const Columns& c, ModelTier tier) {
  std::vector<double> d(static_cast<std::size_t>(c.n), 0.0);
  for (int i = 0; i < c.n; ++i) {
    const double kappa = Columns::at(c.kappa, i);
    if (!c.wet(i) || kappa == 0.0) continue;
    double k_eff = effective_friction(kappa, c.h(i), c.nu);
    if (is_dispersive(tier)) {
      const double s = Columns::at(c.s, i);
      k_eff *= 1.0 + 2.5 * s * s;
    }
    d[static_cast<std::size_t>(i)] = k_eff;
  }
  return d;
}

// Divergence of a face flux: out_i = (flux(i) - flux(i-1)) / dx where flux(k)
// is evaluated between cells k and k+1.
template <class FaceFlux>
std::vector<double> face_divergence(const Columns& c, FaceFlux flux) {
  std::vector<double> out(static_cast<std::size_t>(c.n));
  std::vector<double> f(static_cast<std::size_t>(c.n + 1));
  for (int k = -1; k < c.n; ++k) f[static_cast<std::size_t>(k + 1)] = flux(k);
  for (int i = 0; i < c.n; ++i)
    out[static_cast<std::size_t>(i)] =
        (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i)]) / c.dx;
  return out;
}

double avg(const std::vector<double>& v, int k) {
  return 0.5 * (Columns::at(v, k) + Columns::at(v, k + 1));
}
double diff(const std::vector<double>& v, int k, double dx) {
  return (Columns::at(v, k + 1) - Columns::at(v, k)) / dx;
}

// kappa-weighted sources of the first dispersive model.
std::vector<double> nonhydro1_friction(const Columns& c) {
  std::vector<double> out = face_divergence(c, [&](int k) {
    const double zf = avg(c.z, k);
    return avg(c.kappa, k) / 6.0 * zf * (zf * diff(c.u, k, c.dx) + 7.0 * avg(c.s, k) * avg(c.u, k));
  });
  for (int i = 0; i < c.n; ++i) {
    const double s = Columns::at(c.s, i);
    const double z = Columns::at(c.z, i);
    out[static_cast<std::size_t>(i)] +=
        -0.5 * Columns::at(c.kappa, i) * s * (z * c.ux(i) - s * Columns::at(c.u, i));
  }
  return out;
}

// Explicit bottom-motion contributions of the first dispersive model.
std::vector<double> nonhydro1_motion(const Columns& c) {
  std::vector<double> v(c.u.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = c.u[k] * c.zt[k];
  std::vector<double> out = face_divergence(c, [&](int k) {
    const double zf = avg(c.z, k);
    return -0.5 * zf * zf * diff(v, k, c.dx);
  });
  for (int i = 0; i < c.n; ++i) {
    const double z = Columns::at(c.z, i);
    const double dv = (Columns::at(v, i + 1) - Columns::at(v, i - 1)) / (2.0 * c.dx);
    out[static_cast<std::size_t>(i)] +=
        Columns::at(c.s, i) * z * dv - 0.5 * z * z * Columns::at(c.zxtt, i);
  }
  return out;
}

std::vector<double> nonhydro2_friction(const Columns& c) {
  std::vector<double> out = face_divergence(c, [&](int k) {
    const double Hf = avg(c.H, k);
    return avg(c.kappa, k) * Hf *
           (Hf / 6.0 * diff(c.u, k, c.dx) -
            (7.0 / 6.0 * avg(c.s, k) + diff(c.eta, k, c.dx) / 3.0) * avg(c.u, k));
  });
  for (int i = 0; i < c.n; ++i) {
    const double s = Columns::at(c.s, i);
    const double H = c.h(i);
    out[static_cast<std::size_t>(i)] +=
        Columns::at(c.kappa, i) * s * ((0.5 * c.hx(i) + s) * Columns::at(c.u, i) + 0.5 * H * c.ux(i));
  }
  return out;
}

ColumnState column_at(const Columns& c, const PhysicalParams& params, int i, double deta_dt) {
  ColumnState col;
  col.H = c.h(i);
  col.z_b = Columns::at(c.z, i);
  col.u_bar = Columns::at(c.u, i);
  col.du_dx = c.ux(i);
  col.d2u_dx2 = c.uxx(i);
  col.dzb_dx = Columns::at(c.s, i);
  col.d2zb_dx2 = Columns::at(c.zxx, i);
  col.dzb_dt = Columns::at(c.zt, i);
  col.d2zb_dt2 = 0.0;  // carried by the explicit bottom forcing instead
  col.d2zb_dxdt = Columns::at(c.zxt, i);
  col.deta_dx = c.eta_x(i);
  col.deta_dt = deta_dt;
  col.p_atm = Columns::at(c.pa, i);
  col.g = params.g;
  col.nu = params.nu;
  return col;
}

// Modified-height flux, quadratic pressure terms and bottom forcing of the
// second dispersive model. deta_dt is the ghost-extended free-surface rate.
std::vector<double> nonhydro2_inertial(const Columns& c, const PhysicalParams& params,
                                       const std::vector<double>& deta_dt) {
  const int n = c.n;
  std::vector<double> flux_m(static_cast<std::size_t>(n + 2)), phi(static_cast<std::size_t>(n + 2));
  for (int i = -1; i <= n; ++i) {
    const auto k = static_cast<std::size_t>(i + 1);
    if (!c.wet(i)) continue;
    const double H = c.h(i);
    const double u = Columns::at(c.u, i);
    const double kappa = Columns::at(c.kappa, i);
    flux_m[k] = (modified_height_factor(kappa, H, c.nu) - 1.0) * H * u * u;
    phi[k] = nonhydro2_excess_integral(column_at(c, params, i, Columns::at(deta_dt, i)));
  }
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    if (!c.wet(i)) continue;
    const auto k = static_cast<std::size_t>(i + 1);
    const double dflux = (flux_m[k + 1] - flux_m[k - 1]) / (2.0 * c.dx);
    const double dphi = (phi[k + 1] - phi[k - 1]) / (2.0 * c.dx);
    const double s = Columns::at(c.s, i);
    const double pb = nonhydro2_excess_bottom(column_at(c, params, i, Columns::at(deta_dt, i)));
    const double ztt = Columns::at(c.ztt, i);
    const double h2ztt_x = (c.h(i + 1) * c.h(i + 1) * Columns::at(c.ztt, i + 1) -
                            c.h(i - 1) * c.h(i - 1) * Columns::at(c.ztt, i - 1)) /
                           (2.0 * c.dx);
    out[static_cast<std::size_t>(i)] =
        -dflux - dphi - s * pb + Columns::at(c.z, i) * s * ztt - 0.5 * h2ztt_x;
  }
  return out;
}

BandedMatrix operator_from_columns(const Columns& c, ModelTier tier) {
  const int n = c.n;
  BandedMatrix A(n, 1, 1);
  auto add = [&](int row, int j, double value) {
    const GhostMap gm = map_index(j, n, c.boundary);
    A.add(row, gm.index, gm.sign * value);
  };
  const double dx2 = c.dx * c.dx;
  for (int i = 0; i < n; ++i) {
    if (!c.wet(i)) {
      A.add(i, i, 1.0);
      continue;
    }
    A.add(i, i, c.h(i));
    if (tier == ModelTier::Hydrostatic) continue;
    // Divergence of the face flux c1 (a_R - a_L)/dx + c2 (z_R a_R - z_L a_L)/dx.
    for (int side = 0; side < 2; ++side) {
      const int k = side == 0 ? i : i - 1;  // face between k and k+1
      const double sgn = side == 0 ? 1.0 : -1.0;
      const double zf = avg(c.z, k);
      double c1, c2;
      if (tier == ModelTier::NonHydro2) {
        const double Hf = avg(c.H, k);
        c1 = -Hf * Hf * (2.0 * avg(c.eta, k) + zf) / 6.0;
        c2 = 0.5 * Hf * Hf;
      } else {
        c1 = -zf * zf * zf / 6.0;
        c2 = 0.5 * zf * zf;
      }
      add(i, k + 1, sgn * (c1 + c2 * Columns::at(c.z, k + 1)) / dx2);
      add(i, k, -sgn * (c1 + c2 * Columns::at(c.z, k)) / dx2);
    }
    // Bottom term s (b1 da/dx + b2 d(z a)/dx), centred.
    const double s = Columns::at(c.s, i);
    if (s != 0.0) {
      const double z = Columns::at(c.z, i);
      double b1, b2;
      if (tier == ModelTier::NonHydro2) {
        const double H = c.h(i);
        b1 = -0.5 * H * (Columns::at(c.eta, i) + z);
        b2 = H;
      } else {
        b1 = 0.5 * z * z;
        b2 = -z;
      }
      const double w = s / (2.0 * c.dx);
      add(i, i + 1, w * (b1 + b2 * Columns::at(c.z, i + 1)));
      add(i, i - 1, -w * (b1 + b2 * Columns::at(c.z, i - 1)));
    }
  }
  return A;
}

void check_tier_dispersive(ModelTier tier) {
  if (!is_dispersive(tier))
    throw std::invalid_argument("the Hydrostatic tier has no dispersive system; use hydrostatic_tendency");
}

// Tier-specific additions to the momentum equation beyond the hydrostatic
// part and the drag.
std::vector<double> tier_extras(const Columns& c, const PhysicalParams& params, ModelTier tier,
                                const std::vector<double>& RH, bool dynamic) {
  std::vector<double> extra(static_cast<std::size_t>(c.n), 0.0);
  auto accumulate = [&](const std::vector<double>& v) {
    for (std::size_t i = 0; i < extra.size(); ++i) extra[i] += v[i];
  };
  switch (tier) {
    case ModelTier::Hydrostatic:
      break;
    case ModelTier::NonHydro1:
    case ModelTier::PeregrineInviscid:
      accumulate(nonhydro1_friction(c));
      if (dynamic) accumulate(nonhydro1_motion(c));
      break;
    case ModelTier::NonHydro2: {
      accumulate(nonhydro2_friction(c));
      std::vector<double> deta(static_cast<std::size_t>(c.n), 0.0);
      if (dynamic)
        for (int i = 0; i < c.n; ++i)
          deta[static_cast<std::size_t>(i)] = Columns::at(c.zt, i) + RH[static_cast<std::size_t>(i)];
      accumulate(nonhydro2_inertial(c, params, extend(deta, c.n, c.boundary)));
      break;
    }
  }
  return extra;
}

}  // namespace

double ghost_value(const std::vector<double>& v, int j, const Grid& grid, bool odd) {
  const GhostMap gm = map_index(j, grid.n_cells(), grid.boundary());
  const double value = v[static_cast<std::size_t>(gm.index)];
  return odd ? gm.sign * value : value;
}

std::vector<double> centered_derivative(const std::vector<double>& v, const Grid& grid, bool odd) {
  const int n = grid.n_cells();
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    d[static_cast<std::size_t>(i)] =
        (ghost_value(v, i + 1, grid, odd) - ghost_value(v, i - 1, grid, odd)) / (2.0 * grid.dx());
  return d;
}

PhysicalParams effective_params(const PhysicalParams& params, ModelTier tier) {
  PhysicalParams p = params;
  if (tier == ModelTier::PeregrineInviscid) {
    p.nu = 0.0;
    p.k_l = 0.0;
    p.k_t = 0.0;
  }
  return p;
}

HydrostaticTendency hydrostatic_tendency(const FlowState& state, const BathymetryField& bathy,
                                         const PhysicalParams& params, const Grid& grid,
                                         const SchemeOptions& options) {
  const Columns c = build_columns(state, bathy, params, grid, false);
  ExplicitPart ex = hydrostatic_part(c, params, options, true);
  HydrostaticTendency out;
  out.drag = drag_from_columns(c, ModelTier::Hydrostatic);
  out.dq.resize(ex.Rq.size());
  for (std::size_t i = 0; i < ex.Rq.size(); ++i)
    out.dq[i] = ex.Rq[i] - out.drag[i] * state.velocity(i);
  out.dH = std::move(ex.RH);
  out.dq_explicit = std::move(ex.Rq);
  out.clamped = ex.clamped;
  return out;
}

DispersiveSystem assemble_dispersive(const FlowState& state, const BathymetryField& bathy,
                                     const PhysicalParams& params, const Grid& grid,
                                     ModelTier tier, const SchemeOptions& options) {
  check_tier_dispersive(tier);
  const PhysicalParams p = effective_params(params, tier);
  const Columns c = build_columns(state, bathy, p, grid, false);
  ExplicitPart ex = hydrostatic_part(c, p, options, true);
  const std::vector<double> extra = tier_extras(c, p, tier, ex.RH, true);

  DispersiveSystem sys{operator_from_columns(c, tier), {}, {}, drag_from_columns(c, tier), ex.clamped};
  if (options.check_dominance && !sys.A.diagonally_dominant())
    throw std::runtime_error("dispersive operator is not diagonally dominant");
  sys.F.assign(static_cast<std::size_t>(c.n), 0.0);
  for (int i = 0; i < c.n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (!c.wet(i)) continue;
    sys.F[ii] = ex.Rq[ii] + extra[ii] - Columns::at(c.u, i) * ex.RH[ii];
  }
  sys.dH = std::move(ex.RH);
  return sys;
}

BandedMatrix dispersive_operator(const FlowState& state, const BathymetryField& bathy,
                                 const Grid& grid, ModelTier tier) {
  PhysicalParams none;
  none.k_l = 0.0;
  none.k_t = 0.0;
  return operator_from_columns(build_columns(state, bathy, none, grid, false), tier);
}

std::vector<double> drag_coefficients(const FlowState& state, const BathymetryField& bathy,
                                      const PhysicalParams& params, const Grid& grid,
                                      ModelTier tier) {
  const PhysicalParams p = effective_params(params, tier);
  return drag_from_columns(build_columns(state, bathy, p, grid, false), tier);
}

std::vector<double> friction_sources(const FlowState& state, const BathymetryField& bathy,
                                     const PhysicalParams& params, const Grid& grid,
                                     ModelTier tier) {
  const PhysicalParams p = effective_params(params, tier);
  const Columns c = build_columns(state, bathy, p, grid, false);
  switch (tier) {
    case ModelTier::NonHydro1:
      return nonhydro1_friction(c);
    case ModelTier::NonHydro2:
      return nonhydro2_friction(c);
    default:
      return std::vector<double>(static_cast<std::size_t>(c.n), 0.0);
  }
}

SteadyResidual steady_residual(const FlowState& state, const BathymetryField& bathy,
                               const PhysicalParams& params, const Grid& grid, ModelTier tier,
                               const SchemeOptions& options) {
  const PhysicalParams p = effective_params(params, tier);
  const Columns c = build_columns(state, bathy, p, grid, true);
  ExplicitPart ex = hydrostatic_part(c, p, options, false);
  const std::vector<double> extra = tier_extras(c, p, tier, ex.RH, false);
  const std::vector<double> drag = drag_from_columns(c, tier);
  SteadyResidual r;
  r.momentum.resize(ex.Rq.size());
  for (std::size_t i = 0; i < ex.Rq.size(); ++i)
    r.momentum[i] = ex.Rq[i] + extra[i] - drag[i] * state.velocity(i);
  r.mass = std::move(ex.RH);
  return r;
}

}  // namespace nhsw
