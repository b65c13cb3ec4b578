#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace nhsw {

/// Cells whose water height is below this value are treated as dry: their
/// discharge is frozen at zero and they take no part in friction or
/// dispersive assembly.
inline constexpr double kDryThreshold = 1e-8;

enum class Boundary { Periodic, Wall, Copy };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform 1D cell-centred grid on [x_min, x_max].
class Grid {
 public:
  static constexpr int kMinCells = 8;

  Grid(double x_min, double x_max, int n_cells, Boundary boundary = Boundary::Periodic);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_cells_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }
  Boundary boundary() const { return boundary_; }

  /// Cell centre x_i = x_min + (i + 1/2) dx.
  double x(int i) const { return x_min_ + (i + 0.5) * dx_; }
  /// Right face of cell i, x_{i+1/2}.
  double face(int i) const { return x_min_ + (i + 1) * dx_; }

  std::vector<double> centers() const;

 private:
  double x_min_;
  double x_max_;
  int n_cells_;
  double dx_;
  Boundary boundary_;
};

/// Evolved unknowns: water height H and discharge q = H u_bar per cell.
struct FlowState {
  double t = 0.0;
  std::vector<double> H;
  std::vector<double> q;

  FlowState() = default;
  FlowState(double time, std::vector<double> heights, std::vector<double> discharges);
  static FlowState at_rest(const Grid& grid, double t = 0.0);

  std::size_t size() const { return H.size(); }
  bool wet(std::size_t i) const { return H[i] >= kDryThreshold; }
  /// Depth-averaged velocity; zero in dry cells.
  double velocity(std::size_t i) const { return wet(i) ? q[i] / H[i] : 0.0; }
  std::vector<double> velocities() const;

  /// Throws std::invalid_argument if sizes do not match the grid or H < 0.
  void validate(const Grid& grid) const;
};

// ---------------------------------------------------------------------------
// Bathymetry z_b(x, t) = Z_b(x) + b(t)

struct FlatProfile {
  double level = 0.0;
};

/// Z_b(x) = level + amplitude * exp(-(x - center)^2 / (2 width^2)).
struct GaussianBumpProfile {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 0.0;
  double level = 0.0;
};

/// Values at the cell centres x_min + (i + 1/2) dx of a uniform grid whose left
/// face is x_min. Linear interpolation between samples, centred differences for
/// the slope.
struct SampledProfile {
  double x_min = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  bool periodic = false;
};

using SpatialProfile = std::variant<FlatProfile, GaussianBumpProfile, SampledProfile>;

struct StaticMotion {};

/// b(t) = amplitude * sin(angular_frequency * t + phase).
struct SinusoidMotion {
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double phase = 0.0;
};

/// b(t) = amplitude * exp(-(t - t0)^2 / (2 sigma^2)).
struct GaussianPulseMotion {
  double amplitude = 0.0;
  double t0 = 0.0;
  double sigma = 1.0;
};

using BottomMotion = std::variant<StaticMotion, SinusoidMotion, GaussianPulseMotion>;

/// Separable bottom elevation with closed-form derivatives. Separability means
/// the mixed derivatives d2z/dxdt and d3z/dxdt2 vanish identically.
class BathymetryField {
 public:
  BathymetryField() = default;
  BathymetryField(SpatialProfile profile, BottomMotion motion = StaticMotion{});

  static BathymetryField flat(double level) { return BathymetryField(FlatProfile{level}); }

  double z(double x, double t) const { return profile_value(x) + motion_value(t); }
  double dz_dx(double x, double t) const;
  double d2z_dx2(double x, double t) const;
  double dz_dt(double x, double t) const;
  double d2z_dt2(double x, double t) const;
  double d2z_dxdt(double, double) const { return 0.0; }
  double d3z_dxdt2(double, double) const { return 0.0; }

  bool is_static() const { return std::holds_alternative<StaticMotion>(motion_); }
  const SpatialProfile& profile() const { return profile_; }
  const BottomMotion& motion() const { return motion_; }

  /// Cell-centre samples of z_b at time t.
  std::vector<double> sample(const Grid& grid, double t) const;

 private:
  double profile_value(double x) const;
  double motion_value(double t) const;

  SpatialProfile profile_ = FlatProfile{};
  BottomMotion motion_ = StaticMotion{};
};

// ---------------------------------------------------------------------------
// Atmospheric pressure p^a(x, t) (divided by density)

struct ZeroPressure {};

/// p^a = offset + slope * x.
struct GradientPressure {
  double slope = 0.0;
  double offset = 0.0;
};

/// Static cell-centre samples on a uniform grid.
struct SampledPressure {
  double x_min = 0.0;
  double dx = 1.0;
  std::vector<double> values;
  bool periodic = false;
};

using AtmosphericPressure = std::variant<ZeroPressure, GradientPressure, SampledPressure>;

double pressure_value(const AtmosphericPressure& p, double x, double t);
double pressure_dx(const AtmosphericPressure& p, double x, double t);
double pressure_dt(const AtmosphericPressure& p, double x, double t);

struct PhysicalParams {
  double g = 9.81;
  double nu = 1e-3;
  double k_l = 0.0;
  double k_t = 0.0;
  AtmosphericPressure p_atm = ZeroPressure{};

  bool frictionless() const { return k_l == 0.0 && k_t == 0.0; }
  /// Throws std::invalid_argument on g <= 0, nu < 0 or negative friction.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Scaling regime

enum class Regime { SaintVenant, Boussinesq, FiniteAmplitude, OutOfAsymptoticRange };

std::string to_string(Regime r);

struct ScalingRegime {
  double h = 0.0;       // depth scale [m]
  double lambda = 0.0;  // wavelength scale [m]
  double a_s = 0.0;     // wave amplitude scale [m]
  double a_b = 0.0;     // bathymetry variation scale [m]; reported only

  double epsilon = 0.0;
  double delta = 0.0;
  double ursell = 0.0;
  double c_ref = 0.0;
  double nu0 = 0.0;
  double kappa0_l = 0.0;

  /// Computes the derived quantities. Throws std::invalid_argument if a
  /// length scale or g is not positive.
  static ScalingRegime from_scales(double h, double lambda, double a_s, double a_b,
                                   double g = 9.81, double nu = 0.0, double k_l = 0.0);
};

Regime classify_regime(const ScalingRegime& s);

/// eta_i = z_b(x_i, t) + H_i.
std::vector<double> free_surface(const FlowState& state, const BathymetryField& bathy,
                                 const Grid& grid);

/// Inverse of free_surface: H_i = max(eta_i - z_b(x_i, t), 0).
std::vector<double> heights_from_surface(const std::vector<double>& eta,
                                         const BathymetryField& bathy, const Grid& grid,
                                         double t);

}  // namespace nhsw
