#include "nhsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nhsw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Index of a sample with wrap-around or clamping.
double sample_at(const std::vector<double>& v, long i, bool periodic) {
  const long n = static_cast<long>(v.size());
  if (periodic) {
    i %= n;
    if (i < 0) i += n;
  } else {
    i = std::clamp(i, 0L, n - 1);
  }
  return v[static_cast<std::size_t>(i)];
}

// Centred-difference derivative of order 0, 1 or 2 at sample i.
double sample_derivative(const std::vector<double>& v, long i, double dx, bool periodic, int order) {
  const long n = static_cast<long>(v.size());
  if (order == 0) return sample_at(v, i, periodic);
  if (!periodic) {
    // one-sided at the ends
    if (i <= 0) i = 1;
    if (i >= n - 1) i = n - 2;
  }
  const double vm = sample_at(v, i - 1, periodic);
  const double v0 = sample_at(v, i, periodic);
  const double vp = sample_at(v, i + 1, periodic);
  if (order == 1) return (vp - vm) / (2.0 * dx);
  return (vp - 2.0 * v0 + vm) / (dx * dx);
}

// Linear interpolation of the order-th centred derivative between samples.
double interpolate_sampled(const std::vector<double>& v, double x_min, double dx, bool periodic,
                           double x, int order) {
  if (v.size() < 3) throw std::invalid_argument("sampled field needs at least 3 samples");
  const double s = (x - x_min) / dx - 0.5;
  const double fl = std::floor(s);
  const long i0 = static_cast<long>(fl);
  const double w = s - fl;
  if (!periodic) {
    const long n = static_cast<long>(v.size());
    if (i0 < 0) return sample_derivative(v, 0, dx, false, order);
    if (i0 >= n - 1) return sample_derivative(v, n - 1, dx, false, order);
  }
  const double a = sample_derivative(v, i0, dx, periodic, order);
  if (w == 0.0) return a;
  const double b = sample_derivative(v, i0 + 1, dx, periodic, order);
  return (1.0 - w) * a + w * b;
}

}  // namespace

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Periodic: return "Periodic";
    case Boundary::Wall: return "Wall";
    case Boundary::Copy: return "Copy";
  }
  return "?";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "Periodic" || s == "periodic") return Boundary::Periodic;
  if (s == "Wall" || s == "wall") return Boundary::Wall;
  if (s == "Copy" || s == "copy") return Boundary::Copy;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected Periodic, Wall or Copy)");
}

Grid::Grid(double x_min, double x_max, int n_cells, Boundary boundary)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), dx_(0.0), boundary_(boundary) {
  if (!(x_max > x_min)) throw std::invalid_argument("grid requires x_max > x_min");
  if (n_cells < kMinCells) throw std::invalid_argument("grid requires at least 8 cells");
  dx_ = (x_max - x_min) / n_cells;
}

std::vector<double> Grid::centers() const {
  std::vector<double> xs(static_cast<std::size_t>(n_cells_));
  for (int i = 0; i < n_cells_; ++i) xs[static_cast<std::size_t>(i)] = x(i);
  return xs;
}

FlowState::FlowState(double time, std::vector<double> heights, std::vector<double> discharges)
    : t(time), H(std::move(heights)), q(std::move(discharges)) {}

FlowState FlowState::at_rest(const Grid& grid, double t) {
  const auto n = static_cast<std::size_t>(grid.n_cells());
  return FlowState(t, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

std::vector<double> FlowState::velocities() const {
  std::vector<double> u(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) u[i] = velocity(i);
  return u;
}

void FlowState::validate(const Grid& grid) const {
  const auto n = static_cast<std::size_t>(grid.n_cells());
  if (H.size() != n || q.size() != n) throw std::invalid_argument("state size does not match grid");
  for (double h : H) {
    if (!(h >= 0.0)) throw std::invalid_argument("negative or non-finite water height");
  }
}

// ---------------------------------------------------------------------------

BathymetryField::BathymetryField(SpatialProfile profile, BottomMotion motion)
    : profile_(std::move(profile)), motion_(std::move(motion)) {
  if (const auto* g = std::get_if<GaussianBumpProfile>(&profile_); g && !(g->width > 0.0))
    throw std::invalid_argument("gaussian bump width must be positive");
  if (const auto* s = std::get_if<SampledProfile>(&profile_)) {
    if (s->values.size() < 3) throw std::invalid_argument("sampled bathymetry needs >= 3 values");
    if (!(s->dx > 0.0)) throw std::invalid_argument("sampled bathymetry spacing must be positive");
  }
  if (const auto* p = std::get_if<GaussianPulseMotion>(&motion_); p && !(p->sigma > 0.0))
    throw std::invalid_argument("gaussian pulse sigma must be positive");
}

double BathymetryField::profile_value(double x) const {
  return std::visit(
      overloaded{
          [](const FlatProfile& f) { return f.level; },
          [x](const GaussianBumpProfile& g) {
            const double r = (x - g.center) / g.width;
            return g.level + g.amplitude * std::exp(-0.5 * r * r);
          },
          [x](const SampledProfile& s) {
            return interpolate_sampled(s.values, s.x_min, s.dx, s.periodic, x, 0);
          },
      },
      profile_);
}

double BathymetryField::motion_value(double t) const {
  return std::visit(overloaded{
                        [](const StaticMotion&) { return 0.0; },
                        [t](const SinusoidMotion& m) {
                          return m.amplitude * std::sin(m.angular_frequency * t + m.phase);
                        },
                        [t](const GaussianPulseMotion& m) {
                          const double r = (t - m.t0) / m.sigma;
                          return m.amplitude * std::exp(-0.5 * r * r);
                        },
                    },
                    motion_);
}

double BathymetryField::dz_dx(double x, double) const {
  return std::visit(
      overloaded{
          [](const FlatProfile&) { return 0.0; },
          [x](const GaussianBumpProfile& g) {
            const double r = (x - g.center) / g.width;
            return -g.amplitude * r / g.width * std::exp(-0.5 * r * r);
          },
          [x](const SampledProfile& s) {
            return interpolate_sampled(s.values, s.x_min, s.dx, s.periodic, x, 1);
          },
      },
      profile_);
}

double BathymetryField::d2z_dx2(double x, double) const {
  return std::visit(
      overloaded{
          [](const FlatProfile&) { return 0.0; },
          [x](const GaussianBumpProfile& g) {
            const double r = (x - g.center) / g.width;
            return g.amplitude * (r * r - 1.0) / (g.width * g.width) * std::exp(-0.5 * r * r);
          },
          [x](const SampledProfile& s) {
            return interpolate_sampled(s.values, s.x_min, s.dx, s.periodic, x, 2);
          },
      },
      profile_);
}

double BathymetryField::dz_dt(double, double t) const {
  return std::visit(overloaded{
                        [](const StaticMotion&) { return 0.0; },
                        [t](const SinusoidMotion& m) {
                          return m.amplitude * m.angular_frequency *
                                 std::cos(m.angular_frequency * t + m.phase);
                        },
                        [t](const GaussianPulseMotion& m) {
                          const double r = (t - m.t0) / m.sigma;
                          return -m.amplitude * r / m.sigma * std::exp(-0.5 * r * r);
                        },
                    },
                    motion_);
}

double BathymetryField::d2z_dt2(double, double t) const {
  return std::visit(overloaded{
                        [](const StaticMotion&) { return 0.0; },
                        [t](const SinusoidMotion& m) {
                          const double w = m.angular_frequency;
                          return -m.amplitude * w * w * std::sin(w * t + m.phase);
                        },
                        [t](const GaussianPulseMotion& m) {
                          const double r = (t - m.t0) / m.sigma;
                          return m.amplitude * (r * r - 1.0) / (m.sigma * m.sigma) *
                                 std::exp(-0.5 * r * r);
                        },
                    },
                    motion_);
}

std::vector<double> BathymetryField::sample(const Grid& grid, double t) const {
  std::vector<double> z(static_cast<std::size_t>(grid.n_cells()));
  for (int i = 0; i < grid.n_cells(); ++i) z[static_cast<std::size_t>(i)] = this->z(grid.x(i), t);
  return z;
}

// ---------------------------------------------------------------------------

double pressure_value(const AtmosphericPressure& p, double x, double) {
  return std::visit(overloaded{
                        [](const ZeroPressure&) { return 0.0; },
                        [x](const GradientPressure& g) { return g.offset + g.slope * x; },
                        [x](const SampledPressure& s) {
                          return interpolate_sampled(s.values, s.x_min, s.dx, s.periodic, x, 0);
                        },
                    },
                    p);
}

double pressure_dx(const AtmosphericPressure& p, double x, double) {
  return std::visit(overloaded{
                        [](const ZeroPressure&) { return 0.0; },
                        [](const GradientPressure& g) { return g.slope; },
                        [x](const SampledPressure& s) {
                          return interpolate_sampled(s.values, s.x_min, s.dx, s.periodic, x, 1);
                        },
                    },
                    p);
}

double pressure_dt(const AtmosphericPressure&, double, double) { return 0.0; }

void PhysicalParams::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("gravity g must be positive");
  if (!(nu >= 0.0)) throw std::invalid_argument("viscosity nu must be non-negative");
  if (!(k_l >= 0.0) || !(k_t >= 0.0))
    throw std::invalid_argument("friction coefficients must be non-negative");
}

// ---------------------------------------------------------------------------

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SaintVenant: return "SaintVenant";
    case Regime::Boussinesq: return "Boussinesq";
    case Regime::FiniteAmplitude: return "FiniteAmplitude";
    case Regime::OutOfAsymptoticRange: return "OutOfAsymptoticRange";
  }
  return "?";
}

ScalingRegime ScalingRegime::from_scales(double h, double lambda, double a_s, double a_b, double g,
                                         double nu, double k_l) {
  if (!(h > 0.0) || !(lambda > 0.0) || !(a_s > 0.0))
    throw std::invalid_argument("scaling regime requires positive h, lambda and a_s");
  if (!(a_b >= 0.0)) throw std::invalid_argument("bathymetry scale a_b must be non-negative");
  if (!(g > 0.0)) throw std::invalid_argument("gravity g must be positive");
  ScalingRegime s;
  s.h = h;
  s.lambda = lambda;
  s.a_s = a_s;
  s.a_b = a_b;
  s.epsilon = h / lambda;
  s.delta = a_s / h;
  s.ursell = s.delta / (s.epsilon * s.epsilon);
  s.c_ref = std::sqrt(g * h);
  s.nu0 = nu / (s.epsilon * lambda * s.c_ref);
  s.kappa0_l = k_l / (s.epsilon * s.c_ref);
  return s;
}

Regime classify_regime(const ScalingRegime& s) {
  if (!(s.epsilon > 0.0) || !(s.delta > 0.0) || !(s.h > 0.0) || !(s.lambda > 0.0))
    throw std::invalid_argument("scaling regime requires positive scales");
  constexpr double kSmall = 0.1;
  constexpr double kUrsellLow = 0.2;
  constexpr double kUrsellHigh = 5.0;
  if (s.epsilon > kSmall) return Regime::OutOfAsymptoticRange;
  if (s.delta > kSmall) return Regime::FiniteAmplitude;
  if (s.ursell >= kUrsellLow && s.ursell <= kUrsellHigh) return Regime::Boussinesq;
  if (s.ursell < kUrsellLow) return Regime::SaintVenant;
  return Regime::OutOfAsymptoticRange;
}

std::vector<double> free_surface(const FlowState& state, const BathymetryField& bathy,
                                 const Grid& grid) {
  std::vector<double> eta(state.H.size());
  for (std::size_t i = 0; i < eta.size(); ++i)
    eta[i] = bathy.z(grid.x(static_cast<int>(i)), state.t) + state.H[i];
  return eta;
}

std::vector<double> heights_from_surface(const std::vector<double>& eta,
                                         const BathymetryField& bathy, const Grid& grid,
                                         double t) {
  std::vector<double> H(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i)
    H[i] = std::max(eta[i] - bathy.z(grid.x(static_cast<int>(i)), t), 0.0);
  return H;
}

}  // namespace nhsw
