#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nhsw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAcceptance = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct RunOptions {
  std::string config;
  std::optional<std::string> tier;
  std::optional<double> t_end;
  std::optional<int> cells;
  std::optional<std::string> out;
  std::optional<unsigned> seed;
  bool debug_first_order = false;
};

/// Runs a configured scenario, writes snapshots, the energy time series and a
/// manifest, and prints a summary line.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct DispersionOptions {
  std::string tier = "NonHydro1";
  double h0 = 1.0;
  std::vector<double> k;  // empty: kH0 in {0.25, 0.5, 1}
  int cells = 512;
  bool debug_first_order = false;
};

/// Phase-speed table; exit 1 when any relative error exceeds 1e-2.
int cmd_dispersion(const DispersionOptions& options, std::ostream& out, std::ostream& err);

struct ConvergeOptions {
  std::string scenario = "manufactured-hydrostatic";
  std::vector<int> grids{64, 128, 256};
  std::optional<double> t_end;
  bool debug_first_order = false;
};

/// Convergence table; exit 1 when the finest observed order is below 1.5.
int cmd_converge(const ConvergeOptions& options, std::ostream& out, std::ostream& err);

struct SteadyCheckOptions {
  std::string config;
  std::string compare = "NonHydro1";
};

/// Compares the steady residual of a dispersive tier with the hydrostatic one
/// on the configured initial state. NonHydro1: exit 0 iff the frictionless
/// difference is at most 1e-13 over wet cells. NonHydro2: prints the
/// difference split into friction and inertial parts, exit 0.
int cmd_steady_check(const SteadyCheckOptions& options, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the subcommands.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nhsw::cli
