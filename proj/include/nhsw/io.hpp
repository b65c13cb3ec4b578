#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhsw/core.hpp"
#include "nhsw/diagnostics.hpp"
#include "nhsw/solver.hpp"
#include "nhsw/tier.hpp"

namespace nhsw {

/// Configuration problem. line() is the 1-based line for parse errors (0 for
/// semantic errors); field() is the dotted path, e.g. "physics.nu".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {});
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int cells = 128;
  Boundary boundary = Boundary::Periodic;
  bool operator==(const GridSpec&) const = default;
};

struct PhysicsSpec {
  ModelTier tier = ModelTier::Hydrostatic;
  double g = 9.81;
  double nu = 1e-3;
  double k_l = 0.0;
  double k_t = 0.0;
  std::string p_atm = "zero";  // zero | gradient
  double p_atm_slope = 0.0;
  double p_atm_offset = 0.0;
  bool operator==(const PhysicsSpec&) const = default;
};

struct BathymetrySpec {
  std::string profile = "flat";  // flat | gaussian_bump | sampled
  double level = -1.0;
  double center = 0.0;
  double width = 1.0;
  double amplitude = 0.0;
  std::vector<double> values;      // sampled profile, one value per cell
  std::string motion = "static";   // static | sinusoid | gaussian_pulse
  double motion_amplitude = 0.0;
  double motion_frequency = 0.0;   // angular frequency [rad/s]
  double motion_phase = 0.0;
  double motion_t0 = 0.0;
  double motion_sigma = 1.0;
  bool operator==(const BathymetrySpec&) const = default;
};

enum class InitialKind { LakeAtRest, DamBreak, MonochromaticWave, GaussianHump, Manufactured };

std::string to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& s);

struct InitialSpec {
  InitialKind kind = InitialKind::LakeAtRest;
  double eta0 = 0.0;       // still-water level for every kind except DamBreak
  double eta_left = 0.0;   // DamBreak
  double eta_right = 0.0;
  double x0 = 0.0;
  double amplitude = 0.0;  // MonochromaticWave, GaussianHump
  double k = 1.0;          // MonochromaticWave
  double center = 0.0;     // GaussianHump
  double width = 1.0;
  std::string id = "hydrostatic";  // Manufactured
  bool operator==(const InitialSpec&) const = default;
};

struct SteppingSpec {
  double cfl = 0.5;
  double t_end = 1.0;
  double dt_max = std::numeric_limits<double>::infinity();
  std::optional<double> fixed_dt;
  Reconstruction reconstruction = Reconstruction::VanLeer;
  bool operator==(const SteppingSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  double snapshot_interval = 0.0;   // 0: initial and final snapshots only
  std::vector<std::string> fields;  // subset of w_bottom, w_surface, p_bottom
  bool timeseries = true;
  bool operator==(const OutputSpec&) const = default;
};

struct RegimeSpec {
  double h = 1.0;
  double lambda = 1.0;
  double a_s = 0.0;
  double a_b = 0.0;
  bool operator==(const RegimeSpec&) const = default;
};

struct ScenarioConfig {
  GridSpec grid;
  PhysicsSpec physics;
  BathymetrySpec bathymetry;
  InitialSpec initial;
  SteppingSpec stepping;
  OutputSpec output;
  std::optional<RegimeSpec> regime;
  bool operator==(const ScenarioConfig&) const = default;
};

std::string to_string(Reconstruction r);
Reconstruction reconstruction_from_string(const std::string& s);

/// Parses the sectioned key = value format. Unknown sections or keys,
/// duplicates and malformed values throw ConfigError with the line number.
/// The result is validated with validate_config.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Semantic checks; throws ConfigError naming the field.
void validate_config(const ScenarioConfig& config);

/// Serializes every field with 17 significant digits; parse_config of the
/// output reproduces the config exactly.
std::string format_config(const ScenarioConfig& config);
void write_config(const ScenarioConfig& config, const std::string& path);

/// Solver inputs described by the config. A Manufactured initial condition
/// replaces the bathymetry and physics with those of the manufactured
/// solution and installs its forcing.
Problem make_problem(const ScenarioConfig& config);
FlowState make_initial_state(const ScenarioConfig& config, const Problem& problem);
StepControls make_controls(const ScenarioConfig& config);

struct RegimeVerdict {
  std::optional<ScalingRegime> scales;
  std::string verdict;  // Regime name, or "Unclassified" when a scale vanishes
};

/// Uses the [regime] section when present, otherwise scales estimated from the
/// initial state (mean depth, wavelength or domain length, surface
/// amplitude, bottom relief).
RegimeVerdict regime_verdict(const ScenarioConfig& config);

struct SnapshotFields {
  bool w_bottom = false;
  bool w_surface = false;
  bool p_bottom = false;
  static SnapshotFields from_names(const std::vector<std::string>& names);
};

/// CSV with one row per cell. accel is du_bar/dt from the last solve and only
/// enters p_bottom on the dispersive tiers.
void write_snapshot(std::ostream& out, const FlowState& state, const Problem& problem,
                    const SnapshotFields& fields, const std::vector<double>& accel = {});
void write_snapshot(const std::string& path, const FlowState& state, const Problem& problem,
                    const SnapshotFields& fields, const std::vector<double>& accel = {});

void write_timeseries(std::ostream& out, const std::vector<EnergyReport>& reports);
void write_timeseries(const std::string& path, const std::vector<EnergyReport>& reports);

/// Record of one run, written as JSON next to the snapshots.
struct RunManifest {
  ScenarioConfig config;
  RegimeVerdict regime;
  std::optional<unsigned> seed;
  int steps = 0;
  double t_final = 0.0;
  double mass_drift = 0.0;    // relative
  double energy_drift = 0.0;  // relative to |E(0)|
  int positivity_violations = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> snapshots;  // file names, in time order
  std::string timeseries;              // file name, empty when disabled
};

std::string format_manifest(const RunManifest& manifest);
void write_manifest(const std::string& path, const RunManifest& manifest);

/// Build identifier compiled into the library (git describe of the source).
std::string build_description();

/// 17-significant-digit formatting used by every writer.
std::string format_double(double v);

}  // namespace nhsw
