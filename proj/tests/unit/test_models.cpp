#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "nhsw/closures.hpp"
#include "nhsw/models.hpp"

using namespace nhsw;

namespace {

const ModelTier kAllTiers[] = {ModelTier::Hydrostatic, ModelTier::NonHydro1, ModelTier::NonHydro2,
                               ModelTier::PeregrineInviscid};
const ModelTier kDispersive[] = {ModelTier::NonHydro1, ModelTier::NonHydro2,
                                 ModelTier::PeregrineInviscid};

BathymetryField bump() { return BathymetryField(GaussianBumpProfile{M_PI, 0.5, 0.3, -1.0}); }

PhysicalParams frictional() {
  PhysicalParams p;
  p.nu = 1e-2;
  p.k_l = 1e-2;
  p.k_t = 1e-2;
  return p;
}

FlowState lake(const Grid& grid, const BathymetryField& b, double level) {
  FlowState s = FlowState::at_rest(grid);
  s.H = heights_from_surface(std::vector<double>(grid.n_cells(), level), b, grid, 0.0);
  return s;
}

// Smooth wet state with random Fourier modes.
FlowState random_state(const Grid& grid, const BathymetryField& b, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a1 = 0.05 * u(rng), a2 = 0.03 * u(rng), p1 = 3 * u(rng), p2 = 3 * u(rng);
  const double u0 = 0.3 * u(rng), u1 = 0.1 * u(rng);
  FlowState s = FlowState::at_rest(grid);
  for (int i = 0; i < grid.n_cells(); ++i) {
    const double x = grid.x(i);
    const double eta = a1 * std::sin(x + p1) + a2 * std::cos(2 * x + p2);
    const double H = eta - b.z(x, 0.0);
    s.H[static_cast<std::size_t>(i)] = H;
    s.q[static_cast<std::size_t>(i)] = H * (u0 + u1 * std::cos(x + p2));
  }
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Discharge tendency of any tier: hydrostatic directly, dispersive via A a = F
// and dq = H a + u R_H with the drag added explicitly.
std::vector<double> momentum_tendency(const FlowState& s, const BathymetryField& b,
                                      const PhysicalParams& p, const Grid& g, ModelTier tier) {
  if (tier == ModelTier::Hydrostatic) return hydrostatic_tendency(s, b, p, g).dq;
  const DispersiveSystem sys = assemble_dispersive(s, b, p, g, tier);
  std::vector<double> rhs = sys.F;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= sys.drag[i] * s.velocity(i);
  const auto a = sys.A.solve(rhs);
  std::vector<double> dq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) dq[i] = s.H[i] * a[i] + s.velocity(i) * sys.dH[i];
  return dq;
}

}  // namespace

TEST(Models, LakeAtRestIsSteadyForEveryTier) {
  const Grid g(0.0, 2 * M_PI, 64);
  const auto b = bump();
  const FlowState s = lake(g, b, 0.0);
  for (auto tier : kAllTiers) {
    const auto dq = momentum_tendency(s, b, frictional(), g, tier);
    EXPECT_LT(max_abs(dq), 1e-13) << to_string(tier);
    const auto r = steady_residual(s, b, frictional(), g, tier);
    EXPECT_LT(max_abs(r.mass), 1e-15);
    EXPECT_LT(max_abs(r.momentum), 1e-13);
  }
  EXPECT_LT(max_abs(hydrostatic_tendency(s, b, frictional(), g).dH), 1e-15);
}

TEST(Models, LakeAtRestWithDryCellsAndWalls) {
  // The bump pierces the surface: its crest is dry.
  const Grid g(0.0, 2 * M_PI, 64, Boundary::Wall);
  const auto b = bump();
  const FlowState s = lake(g, b, -0.8);
  ASSERT_FALSE(s.wet(32));
  for (auto tier : kAllTiers) {
    EXPECT_LT(max_abs(momentum_tendency(s, b, frictional(), g, tier)), 1e-13) << to_string(tier);
  }
  EXPECT_LT(max_abs(hydrostatic_tendency(s, b, frictional(), g).dH), 1e-15);
}

TEST(Models, UniformFlowOnFlatBottomIsSteadyWithoutFriction) {
  const Grid g(0.0, 1.0, 32);
  const auto b = BathymetryField::flat(-2.0);
  FlowState s(0.0, std::vector<double>(32, 2.0), std::vector<double>(32, 0.6));
  PhysicalParams p;
  p.nu = 0.05;
  for (auto tier : kAllTiers) EXPECT_LT(max_abs(momentum_tendency(s, b, p, g, tier)), 1e-13);
  EXPECT_LT(max_abs(hydrostatic_tendency(s, b, p, g).dH), 1e-15);
}

TEST(Models, UniformFlowDragIsEffectiveFriction) {
  const Grid g(0.0, 1.0, 16);
  const auto b = BathymetryField::flat(-1.0);
  FlowState s(0.0, std::vector<double>(16, 1.0), std::vector<double>(16, 0.5));
  PhysicalParams p;
  p.nu = 0.01;
  p.k_l = 0.03;
  const double keff = effective_friction(0.03, 1.0, 0.01);
  const auto t = hydrostatic_tendency(s, b, p, g);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(t.drag[i], keff, 1e-15);
    EXPECT_NEAR(t.dq[i], -keff * 0.5, 1e-14);
  }
  for (auto tier : kDispersive) {
    const auto dq = momentum_tendency(s, b, p, g, tier);
    const double expect = tier == ModelTier::PeregrineInviscid ? 0.0 : -keff * 0.5;
    for (double v : dq) EXPECT_NEAR(v, expect, 1e-13) << to_string(tier);
  }
}

TEST(Models, DragSlopeFactorAndDryCells) {
  const Grid g(0.0, 1.0, 16);
  const BathymetryField b(GaussianBumpProfile{0.5, 0.2, 0.1, -1.0});
  FlowState s = lake(g, b, 0.0);
  for (auto& q : s.q) q = 0.2;
  s.H[3] = 0.0;
  s.q[3] = 0.0;
  PhysicalParams p;
  p.nu = 0.01;
  p.k_l = 0.05;
  const auto dh = drag_coefficients(s, b, p, g, ModelTier::Hydrostatic);
  const auto d1 = drag_coefficients(s, b, p, g, ModelTier::NonHydro1);
  const auto dp = drag_coefficients(s, b, p, g, ModelTier::PeregrineInviscid);
  EXPECT_EQ(dh[3], 0.0);
  EXPECT_EQ(d1[3], 0.0);
  for (int i = 0; i < 16; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    EXPECT_EQ(dp[ii], 0.0);
    if (i == 3) continue;
    const double sl = b.dz_dx(g.x(i), 0.0);
    EXPECT_NEAR(dh[ii], effective_friction(0.05, s.H[ii], 0.01), 1e-15);
    EXPECT_NEAR(d1[ii], dh[ii] * (1.0 + 2.5 * sl * sl), 1e-15);
  }
}

TEST(Models, PressureGradientAcceleratesStillWater) {
  const Grid g(0.0, 4.0, 32);
  const auto b = BathymetryField::flat(-1.5);
  const FlowState s = lake(g, b, 0.0);
  PhysicalParams p;
  p.p_atm = GradientPressure{0.2, 3.0};
  for (auto tier : kAllTiers) {
    for (double v : momentum_tendency(s, b, p, g, tier)) EXPECT_NEAR(v, -1.5 * 0.2, 1e-13);
  }
}

TEST(Models, ConstantPressureOffsetChangesNothing) {
  const Grid g(0.0, 2 * M_PI, 48);
  const auto b = bump();
  std::mt19937 rng(11);
  const FlowState s = random_state(g, b, rng);
  PhysicalParams p0 = frictional(), p1 = frictional();
  p1.p_atm = GradientPressure{0.0, 7.5};
  for (auto tier : kAllTiers) {
    const auto a = momentum_tendency(s, b, p0, g, tier);
    const auto c = momentum_tendency(s, b, p1, g, tier);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], 1e-12) << to_string(tier);
  }
}

TEST(Models, MassIsConservedOnPeriodicAndWallDomains) {
  std::mt19937 rng(19);
  for (auto bc : {Boundary::Periodic, Boundary::Wall}) {
    const Grid g(0.0, 2 * M_PI, 40, bc);
    const auto b = bump();
    for (int k = 0; k < 10; ++k) {
      const FlowState s = random_state(g, b, rng);
      const auto t = hydrostatic_tendency(s, b, frictional(), g);
      const double total = std::accumulate(t.dH.begin(), t.dH.end(), 0.0);
      EXPECT_NEAR(total * g.dx(), 0.0, 1e-14);
      for (auto tier : kDispersive) {
        const auto sys = assemble_dispersive(s, b, frictional(), g, tier);
        for (std::size_t i = 0; i < t.dH.size(); ++i) EXPECT_EQ(sys.dH[i], t.dH[i]);
      }
    }
  }
}

TEST(Models, MomentumIsConservedWithoutBottomOrForcing) {
  // Flat periodic bottom, no friction, no p^a: the hydrostatic discharge
  // tendency is a pure flux difference.
  std::mt19937 rng(23);
  const Grid g(0.0, 2 * M_PI, 40);
  const auto b = BathymetryField::flat(-1.0);
  PhysicalParams p;
  p.nu = 1e-2;
  for (int k = 0; k < 10; ++k) {
    const FlowState s = random_state(g, b, rng);
    const auto t = hydrostatic_tendency(s, b, p, g);
    EXPECT_NEAR(std::accumulate(t.dq.begin(), t.dq.end(), 0.0) * g.dx(), 0.0, 1e-13);
  }
}

TEST(Models, HydrostaticTendencyIsSecondOrder) {
  // Analytic spatial operator of the viscous Saint-Venant system, evaluated
  // with a fourth-order difference of closed-form fields.
  const auto b = bump();
  PhysicalParams p;
  p.nu = 0.02;
  p.p_atm = GradientPressure{0.05, 0.0};
  const double g0 = p.g;
  auto H = [&](double x) { return 0.1 * std::sin(x) - b.z(x, 0.0); };
  auto u = [](double x) { return 0.3 + 0.1 * std::cos(x); };
  auto d = [](auto f, double x) {
    const double h = 1e-3;
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
  };
  auto dH_exact = [&](double x) { return -d([&](double y) { return H(y) * u(y); }, x); };
  auto dq_exact = [&](double x) {
    const double flux = d([&](double y) { return H(y) * u(y) * u(y) + 0.5 * g0 * H(y) * H(y); }, x);
    const double visc = d([&](double y) { return 4.0 * p.nu * H(y) * d(u, y); }, x);
    return -flux - g0 * H(x) * b.dz_dx(x, 0.0) + visc - H(x) * 0.05;
  };
  std::vector<double> err_H, err_q;
  for (int n : {64, 128, 256}) {
    const Grid g(0.0, 2 * M_PI, n);
    FlowState s = FlowState::at_rest(g);
    for (int i = 0; i < n; ++i) {
      s.H[static_cast<std::size_t>(i)] = H(g.x(i));
      s.q[static_cast<std::size_t>(i)] = H(g.x(i)) * u(g.x(i));
    }
    const auto t = hydrostatic_tendency(s, b, p, g);
    double eh = 0.0, eq = 0.0;
    for (int i = 0; i < n; ++i) {
      eh += std::abs(t.dH[static_cast<std::size_t>(i)] - dH_exact(g.x(i))) * g.dx();
      eq += std::abs(t.dq[static_cast<std::size_t>(i)] - dq_exact(g.x(i))) * g.dx();
    }
    err_H.push_back(eh);
    err_q.push_back(eq);
  }
  for (std::size_t k = 1; k < err_H.size(); ++k) {
    EXPECT_GT(std::log2(err_H[k - 1] / err_H[k]), 1.7);
    EXPECT_GT(std::log2(err_q[k - 1] / err_q[k]), 1.7);
  }
}

TEST(Models, FirstOrderReconstructionIsFirstOrder) {
  const auto b = BathymetryField::flat(-1.0);
  auto H = [](double x) { return 1.0 + 0.1 * std::sin(x); };
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    const Grid g(0.0, 2 * M_PI, n);
    FlowState s = FlowState::at_rest(g);
    for (int i = 0; i < n; ++i) {
      s.H[static_cast<std::size_t>(i)] = H(g.x(i));
      s.q[static_cast<std::size_t>(i)] = 0.5 * H(g.x(i));
    }
    SchemeOptions o;
    o.reconstruction = Reconstruction::FirstOrder;
    const auto t = hydrostatic_tendency(s, b, PhysicalParams{}, g, o);
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e += std::abs(t.dH[static_cast<std::size_t>(i)] + 0.05 * std::cos(g.x(i))) * g.dx();
    err.push_back(e);
  }
  const double order = std::log2(err[1] / err[2]);
  EXPECT_GT(order, 0.8);
  EXPECT_LT(order, 1.3);
}

TEST(Models, SourceIsAddedPointwise) {
  const Grid g(0.0, 1.0, 16);
  const auto b = BathymetryField::flat(-1.0);
  FlowState s = lake(g, b, 0.0);
  s.t = 0.25;
  SchemeOptions o;
  o.source = [](double x, double t) { return std::array<double, 2>{x * t, -x}; };
  const auto t = hydrostatic_tendency(s, b, PhysicalParams{}, g, o);
  for (int i = 0; i < 16; ++i) {
    EXPECT_NEAR(t.dH[static_cast<std::size_t>(i)], g.x(i) * 0.25, 1e-15);
    EXPECT_NEAR(t.dq[static_cast<std::size_t>(i)], -g.x(i), 1e-15);
  }
}

TEST(Models, FlatOperatorMatchesDenseFormula) {
  // H I + (z0^3 / 3) D2 with the periodic centred second difference.
  const int n = 16;
  const Grid g(0.0, 2.0, n);
  const double z0 = -0.8;
  const auto b = BathymetryField::flat(z0);
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  FlowState s = FlowState::at_rest(g);
  for (auto& h : s.H) h = -z0 + u(rng);
  for (auto tier : {ModelTier::NonHydro1, ModelTier::PeregrineInviscid}) {
    const auto A = dispersive_operator(s, b, g, tier).dense();
    const double c = z0 * z0 * z0 / 3.0 / (g.dx() * g.dx());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double expect = 0.0;
        if (i == j) expect = s.H[static_cast<std::size_t>(i)] - 2.0 * c;
        if ((i + 1) % n == j || (j + 1) % n == i) expect += c;
        EXPECT_NEAR(A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], expect, 1e-12);
      }
  }
}

TEST(Models, OperatorIsDiagonalWhenBottomIsAtZero) {
  const Grid g(0.0, 1.0, 12);
  const auto b = BathymetryField::flat(0.0);
  FlowState s = FlowState::at_rest(g);
  for (std::size_t i = 0; i < s.H.size(); ++i) s.H[i] = 0.5 + 0.1 * static_cast<double>(i);
  for (auto tier : {ModelTier::Hydrostatic, ModelTier::NonHydro1}) {
    const auto A = dispersive_operator(s, b, g, tier).dense();
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(A[i][j], i == j ? s.H[i] : 0.0);
  }
}

TEST(Models, OperatorIsDominantForWetBumpyState) {
  const Grid g(0.0, 2 * M_PI, 64);
  const auto b = bump();
  std::mt19937 rng(31);
  const FlowState s = random_state(g, b, rng);
  for (auto tier : kDispersive) {
    SchemeOptions o;
    o.check_dominance = true;
    EXPECT_NO_THROW(assemble_dispersive(s, b, frictional(), g, tier, o));
  }
}

TEST(Models, DryRowsAreIdentity) {
  const Grid g(0.0, 2 * M_PI, 64);
  const auto b = bump();
  const FlowState s = lake(g, b, -0.8);
  const auto A = dispersive_operator(s, b, g, ModelTier::NonHydro1);
  for (int i = 0; i < 64; ++i) {
    if (s.wet(static_cast<std::size_t>(i))) continue;
    EXPECT_EQ(A.at(i, i), 1.0);
    EXPECT_EQ(A.at(i, (i + 1) % 64), 0.0);
  }
}

TEST(Models, SteadyResidualFirstDispersiveEqualsHydrostaticWithoutFriction) {
  const Grid g(0.0, 2 * M_PI, 64);
  const auto b = bump();
  std::mt19937 rng(37);
  PhysicalParams p;
  p.nu = 1e-3;
  for (int k = 0; k < 20; ++k) {
    const FlowState s = random_state(g, b, rng);
    const auto h = steady_residual(s, b, p, g, ModelTier::Hydrostatic);
    const auto n1 = steady_residual(s, b, p, g, ModelTier::NonHydro1);
    for (std::size_t i = 0; i < h.momentum.size(); ++i) {
      EXPECT_NEAR(n1.momentum[i], h.momentum[i], 1e-14 * std::max(1.0, std::abs(h.momentum[i])));
      EXPECT_EQ(n1.mass[i], h.mass[i]);
    }
  }
}

TEST(Models, FrictionSourcesVanishForHydrostaticAndInviscidTiers) {
  const Grid g(0.0, 2 * M_PI, 32);
  const auto b = bump();
  std::mt19937 rng(41);
  const FlowState s = random_state(g, b, rng);
  EXPECT_EQ(max_abs(friction_sources(s, b, frictional(), g, ModelTier::Hydrostatic)), 0.0);
  EXPECT_EQ(max_abs(friction_sources(s, b, frictional(), g, ModelTier::PeregrineInviscid)), 0.0);
  EXPECT_GT(max_abs(friction_sources(s, b, frictional(), g, ModelTier::NonHydro1)), 0.0);
  PhysicalParams none;
  EXPECT_EQ(max_abs(friction_sources(s, b, none, g, ModelTier::NonHydro2)), 0.0);
}

TEST(Models, HydrostaticTierHasNoDispersiveSystem) {
  const Grid g(0.0, 1.0, 8);
  const FlowState s = lake(g, BathymetryField::flat(-1.0), 0.0);
  EXPECT_THROW(assemble_dispersive(s, BathymetryField::flat(-1.0), PhysicalParams{}, g,
                                   ModelTier::Hydrostatic),
               std::invalid_argument);
}

TEST(Models, EffectiveParamsStripPeregrine) {
  const PhysicalParams p = effective_params(frictional(), ModelTier::PeregrineInviscid);
  EXPECT_EQ(p.nu, 0.0);
  EXPECT_EQ(p.k_l, 0.0);
  EXPECT_EQ(p.k_t, 0.0);
  EXPECT_EQ(effective_params(frictional(), ModelTier::NonHydro2).nu, 1e-2);
}

TEST(Models, GhostRules) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8};
  const Grid per(0.0, 1.0, 8), wall(0.0, 1.0, 8, Boundary::Wall), copy(0.0, 1.0, 8, Boundary::Copy);
  EXPECT_EQ(ghost_value(v, -1, per), 8.0);
  EXPECT_EQ(ghost_value(v, 9, per), 2.0);
  EXPECT_EQ(ghost_value(v, -1, wall), 1.0);
  EXPECT_EQ(ghost_value(v, -2, wall, true), -2.0);
  EXPECT_EQ(ghost_value(v, 8, wall, true), -8.0);
  EXPECT_EQ(ghost_value(v, 10, copy), 8.0);
  const auto d = centered_derivative(v, copy);
  EXPECT_DOUBLE_EQ(d[3], 8.0);
  EXPECT_DOUBLE_EQ(d[0], 4.0);
}
