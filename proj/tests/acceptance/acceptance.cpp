// Acceptance checks. Prints one PASS/FAIL line per criterion and exits with 1
// if any of them fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nhsw/closures.hpp"
#include "nhsw/core.hpp"
#include "nhsw/diagnostics.hpp"
#include "nhsw/models.hpp"
#include "nhsw/solver.hpp"
#include "quadrature.hpp"

using namespace nhsw;

namespace {

constexpr ModelTier kAllTiers[] = {ModelTier::Hydrostatic, ModelTier::NonHydro1, ModelTier::NonHydro2,
                                   ModelTier::PeregrineInviscid};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double sum_dx(const std::vector<double>& v, const Grid& g) {
  double s = 0.0;
  for (double x : v) s += x;
  return s * g.dx();
}

FlowState from_surface(const Grid& g, const BathymetryField& b, const std::function<double(double)>& eta,
                       const std::function<double(double)>& u = {}) {
  std::vector<double> e(static_cast<std::size_t>(g.n_cells()));
  for (int i = 0; i < g.n_cells(); ++i) e[static_cast<std::size_t>(i)] = eta(g.x(i));
  FlowState s = FlowState::at_rest(g);
  s.H = heights_from_surface(e, b, g, 0.0);
  if (u)
    for (int i = 0; i < g.n_cells(); ++i) s.q[static_cast<std::size_t>(i)] = s.H[static_cast<std::size_t>(i)] * u(g.x(i));
  return s;
}

// Fixed number of steps at the adaptive stable dt.
template <class Obs>
FlowState run_steps(const Problem& p, FlowState s, int steps, double cfl, Obs&& obs) {
  StepControls c;
  c.cfl = cfl;
  for (int n = 0; n < steps; ++n) {
    const double dt = stable_dt(s, p, c);
    s = step(s, p, dt);
    obs(s);
  }
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// --- 1 ----------------------------------------------------------------------

Verdict mass_conservation() {
  const Grid g(0.0, 20.0, 256, Boundary::Periodic);
  const BathymetryField b = BathymetryField::flat(-1.0);
  double worst = 0.0;
  for (ModelTier tier : kAllTiers) {
    Problem p{g, b, PhysicalParams{}, tier, SchemeOptions{}};
    p.params.k_l = 1e-2;
    const FlowState s0 = from_surface(g, b, [](double x) { return (x > 5.0 && x < 10.0) ? 0.3 : 0.0; });
    const double m0 = sum_dx(s0.H, g);
    run_steps(p, s0, 1000, 0.4, [&](const FlowState& s) {
      worst = std::max(worst, std::abs(sum_dx(s.H, g) - m0) / m0);
    });
  }
  return {worst <= 1e-12, "dam break, 4 tiers, 256 cells, 1000 steps: max |dM|/M = " + fmt("%.2e", worst) +
                              " (tol 1e-12)"};
}

// --- 2 ----------------------------------------------------------------------

Verdict well_balanced() {
  double worst_u = 0.0, worst_eta = 0.0;
  struct Case {
    double amplitude;
    Boundary boundary;
  };
  // submerged bump on a periodic domain, emerged bump with a dry crest between walls
  for (const Case c : {Case{0.4, Boundary::Periodic}, Case{1.5, Boundary::Wall}}) {
    const Grid g(0.0, 10.0, 256, c.boundary);
    const BathymetryField b(GaussianBumpProfile{5.0, 1.0, c.amplitude, -1.0});
    for (ModelTier tier : kAllTiers) {
      Problem p{g, b, PhysicalParams{}, tier, SchemeOptions{}};
      p.params.k_l = 1e-2;
      const FlowState s0 = from_surface(g, b, [](double) { return 0.0; });
      const std::vector<double> eta0 = free_surface(s0, b, g);
      run_steps(p, s0, 1000, 0.4, [&](const FlowState& s) {
        const std::vector<double> eta = free_surface(s, b, g);
        for (std::size_t i = 0; i < s.size(); ++i) {
          worst_u = std::max(worst_u, std::abs(s.velocity(i)));
          if (s.wet(i)) worst_eta = std::max(worst_eta, std::abs(eta[i] - eta0[i]));
        }
      });
    }
  }
  return {worst_u <= 1e-12 && worst_eta <= 1e-12,
          "lake at rest over submerged and emerged bumps, 4 tiers, 1000 steps: max|u| = " + fmt("%.2e", worst_u) +
              ", max|d eta| = " + fmt("%.2e", worst_eta) + " (tol 1e-12)"};
}

// --- 3 ----------------------------------------------------------------------

Verdict stationary_equivalence() {
  std::mt19937 rng(20260);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Grid g(0.0, 10.0, 128, Boundary::Periodic);
    const BathymetryField b(GaussianBumpProfile{10.0 * U(rng), 0.5 + U(rng), 0.6 * U(rng) - 0.3, -1.0 - U(rng)});
    const double a1 = 0.2 * U(rng), a2 = 0.1 * U(rng), u0 = U(rng) - 0.5, u1 = 0.4 * U(rng);
    const double ph = 6.28 * U(rng);
    const double k = 2.0 * std::numbers::pi / 10.0;
    FlowState s = from_surface(
        g, b, [&](double x) { return a1 * std::sin(k * x + ph) + a2 * std::cos(2 * k * x); },
        [&](double x) { return u0 + u1 * std::cos(k * x - ph); });
    PhysicalParams params;
    params.nu = 1e-3 + 0.1 * U(rng);
    const SteadyResidual h = steady_residual(s, b, params, g, ModelTier::Hydrostatic);
    const SteadyResidual n = steady_residual(s, b, params, g, ModelTier::NonHydro1);
    worst = std::max({worst, max_abs_diff(h.mass, n.mass), max_abs_diff(h.momentum, n.momentum)});
  }
  return {worst <= 1e-14, "100 random smooth wet states, frictionless: max |R_NH1 - R_hydro| = " +
                              fmt("%.2e", worst) + " (tol 1e-14)"};
}

// --- 4 and 9 ----------------------------------------------------------------

struct BudgetRun {
  double mean_residual = 0.0;
  double max_rel_increase = -1.0;  // max (E_{n+1} - E_n) / |E_n|
  double max_work = 0.0;           // max |modeled rate|
};

BudgetRun budget_run(int cells, const BathymetryField& b, double t_end) {
  const Grid g(0.0, 20.0, cells, Boundary::Periodic);
  Problem p{g, b, PhysicalParams{}, ModelTier::Hydrostatic, SchemeOptions{}};
  p.params.nu = 1e-3;
  p.params.k_l = 1e-2;
  const FlowState s0 = from_surface(g, b, [](double x) { return 0.1 * std::exp(-(x - 6.0) * (x - 6.0) / 2.0); });
  EnergyTracker tracker(p);
  tracker.record(s0);
  StepControls c;
  c.t_end = t_end;
  c.cfl = 0.4;
  BudgetRun out;
  int n = 0;
  integrate(p, s0, c, [&](const FlowState& s, int, double) {
    const double e_prev = tracker.reports().back().E_h;
    const EnergyReport& r = tracker.record(s);
    out.mean_residual += r.budget_residual;
    out.max_rel_increase = std::max(out.max_rel_increase, (r.E_h - e_prev) / std::abs(e_prev));
    out.max_work = std::max(out.max_work, std::abs(r.modeled_rate));
    ++n;
  });
  out.mean_residual /= n;
  return out;
}

struct Orders {
  std::vector<double> errors, orders;
  double min_order() const { return *std::min_element(orders.begin(), orders.end()); }
};

Orders observed_orders(const std::vector<double>& errors) {
  Orders o{errors, {}};
  for (std::size_t i = 1; i < errors.size(); ++i) o.orders.push_back(std::log2(errors[i - 1] / errors[i]));
  return o;
}

std::string list(const std::vector<double>& v, const char* f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(f, v[i]);
  return s;
}

Verdict energy_dissipation() {
  const BathymetryField b(GaussianBumpProfile{10.0, 1.5, 0.2, -1.0});
  std::vector<double> res;
  double worst_increase = -1.0;
  for (int cells : {100, 200, 400, 800}) {
    const BudgetRun r = budget_run(cells, b, 2.0);
    res.push_back(r.mean_residual);
    worst_increase = std::max(worst_increase, r.max_rel_increase);
  }
  const Orders o = observed_orders(res);
  const bool pass = worst_increase <= 1e-10 && o.min_order() >= 1.8;
  return {pass, "max relative step increase of E_h = " + fmt("%.2e", worst_increase) +
                    " (tol 1e-10); budget residual on 100..800 cells " + list(res, "%.2e") + ", orders " +
                    list(o.orders, "%.2f") + " (>= 1.8)"};
}

Verdict moving_bottom() {
  const BathymetryField b(FlatProfile{-1.0}, SinusoidMotion{0.05, 2.0, 0.0});
  // mass on every tier
  double worst_mass = 0.0;
  {
    const Grid g(0.0, 20.0, 256, Boundary::Periodic);
    for (ModelTier tier : kAllTiers) {
      Problem p{g, b, PhysicalParams{}, tier, SchemeOptions{}};
      p.params.k_l = 1e-2;
      const FlowState s0 =
          from_surface(g, b, [](double x) { return 0.1 * std::exp(-(x - 6.0) * (x - 6.0) / 2.0); });
      const double m0 = sum_dx(s0.H, g);
      run_steps(p, s0, 1000, 0.4, [&](const FlowState& s) {
        worst_mass = std::max(worst_mass, std::abs(sum_dx(s.H, g) - m0) / m0);
      });
    }
  }
  std::vector<double> res;
  double work = 0.0;
  for (int cells : {100, 200, 400, 800}) {
    const BudgetRun r = budget_run(cells, b, 2.0);
    res.push_back(r.mean_residual);
    work = r.max_work;
  }
  const Orders o = observed_orders(res);
  const bool pass = worst_mass <= 1e-12 && o.min_order() >= 1.8;
  return {pass, "b(t) = 0.05 sin(2t): max |dM|/M = " + fmt("%.2e", worst_mass) +
                    " over 4 tiers; hydrostatic budget residual " + list(res, "%.2e") + " against work rate " +
                    fmt("%.2e", work) + ", orders " + list(o.orders, "%.2f") + " (>= 1.8)"};
}

// --- 5 ----------------------------------------------------------------------

Verdict dispersion() {
  double worst = 0.0;
  std::string detail;
  for (ModelTier tier : {ModelTier::NonHydro1, ModelTier::PeregrineInviscid, ModelTier::Hydrostatic}) {
    double tier_worst = 0.0;
    for (double kH : {0.25, 0.5, 1.0}) {
      const DispersionResult r = run_dispersion_case(tier, 1.0, kH, 512);
      tier_worst = std::max(tier_worst, r.relative_error);
    }
    worst = std::max(worst, tier_worst);
    detail += (detail.empty() ? "" : ", ") + to_string(tier) + " " + fmt("%.2e", tier_worst);
  }
  return {worst <= 0.01, "kH0 in {0.25,0.5,1}, 512 cells, max relative phase-speed error: " + detail + " (tol 1e-2)"};
}

// --- 6 ----------------------------------------------------------------------

Verdict convergence() {
  bool pass = true;
  std::string detail;
  const auto study = [&](ConvergenceScenario sc, const std::vector<int>& grids) {
    const ConvergenceTable t = convergence_study(sc, grids);
    std::vector<double> orders;
    for (const ConvergenceRow& r : t.rows)
      if (r.order) orders.push_back(*r.order);
    for (double o : orders) pass = pass && o >= 1.8 && o <= 2.2;
    pass = pass && orders.size() == 3;
    detail += (detail.empty() ? "" : "; ") + to_string(sc) + " orders " + list(orders, "%.3f");
  };
  study(ConvergenceScenario::ManufacturedHydrostatic, {64, 128, 256, 512});
  study(ConvergenceScenario::ManufacturedNonHydro1, {256, 512, 1024, 2048});
  return {pass, detail + " (range [1.8, 2.2])"};
}

// --- 7 ----------------------------------------------------------------------

Verdict closures() {
  const nhsw::testing::GaussLegendre gl(32);
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double avg_err = 0.0, w2_err = 0.0, coef_err = 0.0, profile_dev = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const double H = 0.1 + 2.0 * U(rng), nu = 1e-3 + U(rng), ub = 2.0 * U(rng) - 1.0;
    const double kappa = U(rng) * nu / H;  // kappa H / nu <= 1
    const double avg = gl.integrate([&](double z) { return velocity_profile(ub, H, kappa, nu, z); }, 0.0, H) / H;
    avg_err = std::max(avg_err, std::abs(avg - ub));

    ColumnState col;
    col.H = H;
    col.z_b = -1.0 - U(rng);
    col.u_bar = ub;
    col.du_dx = U(rng) - 0.5;
    col.dzb_dx = 0.4 * U(rng) - 0.2;
    col.dzb_dt = 0.2 * U(rng) - 0.1;
    const double quad =
        gl.integrate([&](double z) { return std::pow(vertical_velocity(col, z), 2); }, col.z_b, col.eta());
    w2_err = std::max(w2_err, std::abs(column_w2_integral(col) - quad) / std::max(1.0, std::abs(quad)));

    // kappa-linear part of the parabola written around the bottom velocity
    const double corr =
        gl.integrate([&](double z) { return std::pow(kappa / nu * (z - z * z / (2.0 * H)), 2); }, 0.0, H) / H;
    coef_err = std::max(coef_err, std::abs(modified_height_factor(kappa, H, nu) - 1.0 - corr));

    const double mean_sq =
        gl.integrate([&](double z) { return std::pow(velocity_profile(1.0, H, kappa, nu, z), 2); }, 0.0, H) / H;
    const double r = kappa * H / nu;
    if (r > 0.1) profile_dev = std::max(profile_dev, (mean_sq - 1.0) / (modified_height_factor(kappa, H, nu) - 1.0));
  }
  const bool pass = avg_err <= 1e-12 && w2_err <= 1e-12 && coef_err <= 1e-10;
  return {pass, "depth average err " + fmt("%.2e", avg_err) + " (tol 1e-12), w^2 err " + fmt("%.2e", w2_err) +
                    " (tol 1e-12), 2/15 coefficient err " + fmt("%.2e", coef_err) +
                    " (tol 1e-10); mean-preserving profile excess / coefficient = " + fmt("%.4f", profile_dev)};
}

// --- 8 ----------------------------------------------------------------------

struct Trajectory {
  std::vector<FlowState> states;
};

Trajectory fixed_dt_run(const Problem& p, const FlowState& s0, double dt, int steps) {
  Trajectory t;
  FlowState s = s0;
  for (int n = 0; n < steps; ++n) {
    s = step(s, p, dt);
    t.states.push_back(s);
  }
  return t;
}

double l2_diff(const FlowState& a, const FlowState& b, const Grid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += std::pow(a.H[i] - b.H[i], 2) + std::pow(a.q[i] - b.q[i], 2);
  return std::sqrt(s * g.dx());
}

Verdict degeneracy() {
  // zero bottom elevation: the dispersive operator is diagonal
  double flat_diff = 0.0;
  {
    const Grid g(0.0, 20.0, 256, Boundary::Periodic);
    const BathymetryField b = BathymetryField::flat(0.0);
    PhysicalParams params;
    params.k_l = 1e-2;
    const FlowState s0 = from_surface(
        g, b, [](double x) { return 1.0 + 0.2 * std::exp(-(x - 8.0) * (x - 8.0)); },
        [](double x) { return 0.1 * std::sin(2.0 * std::numbers::pi * x / 20.0); });
    const Problem ph{g, b, params, ModelTier::Hydrostatic, SchemeOptions{}};
    const Problem pn{g, b, params, ModelTier::NonHydro1, SchemeOptions{}};
    StepControls c;
    c.cfl = 0.4;
    const double dt = stable_dt(s0, ph, c);
    const Trajectory th = fixed_dt_run(ph, s0, dt, 100), tn = fixed_dt_run(pn, s0, dt, 100);
    for (std::size_t n = 0; n < th.states.size(); ++n)
      flat_diff = std::max({flat_diff, max_abs_diff(th.states[n].H, tn.states[n].H),
                            max_abs_diff(th.states[n].q, tn.states[n].q)});
  }

  // vanishing viscosity and friction
  std::vector<double> diffs;
  const std::vector<double> betas = {1e-2, 1e-3};
  {
    const Grid g(0.0, 20.0, 256, Boundary::Periodic);
    const BathymetryField b(GaussianBumpProfile{10.0, 1.5, 0.3, -1.0});
    const FlowState s0 = from_surface(g, b, [](double x) { return 0.1 * std::exp(-(x - 6.0) * (x - 6.0) / 2.0); });
    const Problem pp{g, b, PhysicalParams{}, ModelTier::PeregrineInviscid, SchemeOptions{}};
    StepControls c;
    c.cfl = 0.4;
    const double dt = stable_dt(s0, pp, c);
    const int steps = static_cast<int>(std::ceil(2.0 / dt));
    const FlowState ref = fixed_dt_run(pp, s0, dt, steps).states.back();
    for (double beta : betas) {
      PhysicalParams params;
      params.nu = beta * 1.0;
      params.k_l = beta * 1.0;
      const Problem pn{g, b, params, ModelTier::NonHydro1, SchemeOptions{}};
      diffs.push_back(l2_diff(fixed_dt_run(pn, s0, dt, steps).states.back(), ref, g));
    }
  }
  const double slope = std::log(diffs[0] / diffs[1]) / std::log(betas[0] / betas[1]);
  const bool pass = flat_diff <= 1e-13 && std::abs(slope - 1.0) <= 0.1;
  return {pass, "z_b = 0: max |NH1 - hydro| over 100 steps = " + fmt("%.2e", flat_diff) +
                    " (tol 1e-13); |NH1(beta) - Peregrine| = " + list(diffs, "%.3e") + " at beta = 1e-2,1e-3, slope " +
                    fmt("%.3f", slope) + " (|slope - 1| <= 0.1)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*fn)();
  };
  const Criterion criteria[] = {
      {"mass conservation", mass_conservation},    {"well-balancedness", well_balanced},
      {"stationary equivalence", stationary_equivalence},
      {"energy dissipation", energy_dissipation},  {"dispersion relation", dispersion},
      {"convergence order", convergence},          {"closure oracles", closures},
      {"degeneracy limits", degeneracy},           {"moving-bottom forcing", moving_bottom},
  };
  int failures = 0;
  int id = 1;
  for (const Criterion& c : criteria) {
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id++, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
