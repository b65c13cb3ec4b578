#include "nhsw/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nhsw/closures.hpp"

#ifndef NHSW_GIT_DESCRIBE
#define NHSW_GIT_DESCRIBE "unknown"
#endif

namespace nhsw {

ConfigError::ConfigError(const std::string& message, int line, std::string field)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : (field.empty() ? message : field + ": " + message)),
      line_(line),
      field_(std::move(field)) {}

std::string build_description() { return NHSW_GIT_DESCRIBE; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::LakeAtRest: return "LakeAtRest";
    case InitialKind::DamBreak: return "DamBreak";
    case InitialKind::MonochromaticWave: return "MonochromaticWave";
    case InitialKind::GaussianHump: return "GaussianHump";
    case InitialKind::Manufactured: return "Manufactured";
  }
  return "?";
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

InitialKind initial_kind_from_string(const std::string& s) {
  const std::string l = lower(s);
  for (auto k : {InitialKind::LakeAtRest, InitialKind::DamBreak, InitialKind::MonochromaticWave,
                 InitialKind::GaussianHump, InitialKind::Manufactured})
    if (lower(to_string(k)) == l) return k;
  throw std::invalid_argument("unknown initial condition '" + s +
                              "' (expected LakeAtRest, DamBreak, MonochromaticWave, "
                              "GaussianHump or Manufactured)");
}

std::string to_string(Reconstruction r) {
  switch (r) {
    case Reconstruction::FirstOrder: return "FirstOrder";
    case Reconstruction::Minmod: return "Minmod";
    case Reconstruction::VanLeer: return "VanLeer";
  }
  return "?";
}

Reconstruction reconstruction_from_string(const std::string& s) {
  const std::string l = lower(s);
  if (l == "firstorder") return Reconstruction::FirstOrder;
  if (l == "minmod") return Reconstruction::Minmod;
  if (l == "vanleer") return Reconstruction::VanLeer;
  throw std::invalid_argument("unknown reconstruction '" + s +
                              "' (expected FirstOrder, Minmod or VanLeer)");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

double parse_double(const std::string& v, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("field " + field + ": expected a number, got '" + v + "'", line, field);
}

int parse_int(const std::string& v, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty() && d >= INT32_MIN && d <= INT32_MAX) return static_cast<int>(d);
  } catch (const std::exception&) {
  }
  throw ConfigError("field " + field + ": expected an integer, got '" + v + "'", line, field);
}

bool parse_bool(const std::string& v, int line, const std::string& field) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "1") return true;
  if (l == "false" || l == "no" || l == "0") return false;
  throw ConfigError("field " + field + ": expected true or false, got '" + v + "'", line, field);
}

template <class F>
auto parse_enum(F&& f, const std::string& v, int line, const std::string& field) {
  try {
    return f(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field " + field + ": " + e.what(), line, field);
  }
}

using Setter = std::function<void(ScenarioConfig&, const std::string& value, int line)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;

#define NHSW_DOUBLE(section, key, expr)                                               \
  t[section][key] = [](ScenarioConfig& c, const std::string& v, int line) {         \
    c.expr = parse_double(v, line, std::string(section) + "." + key);                \
  }

    NHSW_DOUBLE("grid", "x_min", grid.x_min);
    NHSW_DOUBLE("grid", "x_max", grid.x_max);
    t["grid"]["cells"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.grid.cells = parse_int(v, line, "grid.cells");
    };
    t["grid"]["boundary"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.grid.boundary = parse_enum(boundary_from_string, v, line, "grid.boundary");
    };

    t["physics"]["tier"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.physics.tier = parse_enum(tier_from_string, v, line, "physics.tier");
    };
    NHSW_DOUBLE("physics", "g", physics.g);
    NHSW_DOUBLE("physics", "nu", physics.nu);
    NHSW_DOUBLE("physics", "k_l", physics.k_l);
    NHSW_DOUBLE("physics", "k_t", physics.k_t);
    t["physics"]["p_atm"] = [](ScenarioConfig& c, const std::string& v, int) {
      c.physics.p_atm = v;
    };
    NHSW_DOUBLE("physics", "p_atm_slope", physics.p_atm_slope);
    NHSW_DOUBLE("physics", "p_atm_offset", physics.p_atm_offset);

    t["bathymetry"]["profile"] = [](ScenarioConfig& c, const std::string& v, int) {
      c.bathymetry.profile = v;
    };
    NHSW_DOUBLE("bathymetry", "level", bathymetry.level);
    NHSW_DOUBLE("bathymetry", "center", bathymetry.center);
    NHSW_DOUBLE("bathymetry", "width", bathymetry.width);
    NHSW_DOUBLE("bathymetry", "amplitude", bathymetry.amplitude);
    t["bathymetry"]["values"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.bathymetry.values.clear();
      for (const auto& item : split_list(v))
        c.bathymetry.values.push_back(parse_double(item, line, "bathymetry.values"));
    };
    t["bathymetry"]["motion"] = [](ScenarioConfig& c, const std::string& v, int) {
      c.bathymetry.motion = v;
    };
    NHSW_DOUBLE("bathymetry", "motion_amplitude", bathymetry.motion_amplitude);
    NHSW_DOUBLE("bathymetry", "motion_frequency", bathymetry.motion_frequency);
    NHSW_DOUBLE("bathymetry", "motion_phase", bathymetry.motion_phase);
    NHSW_DOUBLE("bathymetry", "motion_t0", bathymetry.motion_t0);
    NHSW_DOUBLE("bathymetry", "motion_sigma", bathymetry.motion_sigma);

    t["initial"]["kind"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.initial.kind = parse_enum(initial_kind_from_string, v, line, "initial.kind");
    };
    NHSW_DOUBLE("initial", "eta0", initial.eta0);
    NHSW_DOUBLE("initial", "eta_left", initial.eta_left);
    NHSW_DOUBLE("initial", "eta_right", initial.eta_right);
    NHSW_DOUBLE("initial", "x0", initial.x0);
    NHSW_DOUBLE("initial", "amplitude", initial.amplitude);
    NHSW_DOUBLE("initial", "k", initial.k);
    NHSW_DOUBLE("initial", "center", initial.center);
    NHSW_DOUBLE("initial", "width", initial.width);
    t["initial"]["id"] = [](ScenarioConfig& c, const std::string& v, int) { c.initial.id = v; };

    NHSW_DOUBLE("stepping", "cfl", stepping.cfl);
    NHSW_DOUBLE("stepping", "t_end", stepping.t_end);
    NHSW_DOUBLE("stepping", "dt_max", stepping.dt_max);
    t["stepping"]["fixed_dt"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.stepping.fixed_dt = parse_double(v, line, "stepping.fixed_dt");
    };
    t["stepping"]["reconstruction"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.stepping.reconstruction =
          parse_enum(reconstruction_from_string, v, line, "stepping.reconstruction");
    };

    t["output"]["dir"] = [](ScenarioConfig& c, const std::string& v, int) { c.output.dir = v; };
    NHSW_DOUBLE("output", "snapshot_interval", output.snapshot_interval);
    t["output"]["fields"] = [](ScenarioConfig& c, const std::string& v, int) {
      c.output.fields = split_list(v);
    };
    t["output"]["timeseries"] = [](ScenarioConfig& c, const std::string& v, int line) {
      c.output.timeseries = parse_bool(v, line, "output.timeseries");
    };

    auto regime = [](ScenarioConfig& c) -> RegimeSpec& {
      if (!c.regime) c.regime = RegimeSpec{};
      return *c.regime;
    };
    t["regime"]["h"] = [regime](ScenarioConfig& c, const std::string& v, int line) {
      regime(c).h = parse_double(v, line, "regime.h");
    };
    t["regime"]["lambda"] = [regime](ScenarioConfig& c, const std::string& v, int line) {
      regime(c).lambda = parse_double(v, line, "regime.lambda");
    };
    t["regime"]["a_s"] = [regime](ScenarioConfig& c, const std::string& v, int line) {
      regime(c).a_s = parse_double(v, line, "regime.a_s");
    };
    t["regime"]["a_b"] = [regime](ScenarioConfig& c, const std::string& v, int line) {
      regime(c).a_b = parse_double(v, line, "regime.a_b");
    };
#undef NHSW_DOUBLE
    return t;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig config;
  const auto& table = setters();
  std::string section;
  std::set<std::string> seen;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (!table.count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      if (section == "regime" && !config.regime) config.regime = RegimeSpec{};
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside of any section", line_no);
    const std::string field = section + "." + key;
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no, field);
    if (!seen.insert(field).second) throw ConfigError("duplicate key " + field, line_no, field);
    if (value.empty() && key != "fields" && key != "values")
      throw ConfigError("field " + field + " has no value", line_no, field);
    it->second(config, value, line_no);
  }
  validate_config(config);
  return config;
}

ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(message, 0, field);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void validate_config(const ScenarioConfig& c) {
  require(finite(c.grid.x_min) && finite(c.grid.x_max) && c.grid.x_max > c.grid.x_min, "grid.x_max",
          "x_max must be finite and greater than x_min");
  require(c.grid.cells >= Grid::kMinCells, "grid.cells", "at least 8 cells are required");

  const auto& p = c.physics;
  require(finite(p.g) && p.g > 0.0, "physics.g", "g must be positive");
  require(finite(p.nu) && p.nu >= 0.0, "physics.nu", "nu must be non-negative");
  require(finite(p.k_l) && p.k_l >= 0.0, "physics.k_l", "k_l must be non-negative");
  require(finite(p.k_t) && p.k_t >= 0.0, "physics.k_t", "k_t must be non-negative");
  const bool friction = p.k_l > 0.0 || p.k_t > 0.0;
  if (p.tier != ModelTier::PeregrineInviscid && (friction || p.tier == ModelTier::NonHydro2))
    require(p.nu > 0.0, "physics.nu", "friction closure requires nu>0");
  require(p.p_atm == "zero" || p.p_atm == "gradient", "physics.p_atm",
          "unknown atmospheric pressure '" + p.p_atm + "' (expected zero or gradient)");
  require(finite(p.p_atm_slope) && finite(p.p_atm_offset), "physics.p_atm_slope",
          "pressure coefficients must be finite");

  const auto& b = c.bathymetry;
  require(b.profile == "flat" || b.profile == "gaussian_bump" || b.profile == "sampled",
          "bathymetry.profile",
          "unknown profile '" + b.profile + "' (expected flat, gaussian_bump or sampled)");
  require(finite(b.level) && finite(b.amplitude) && finite(b.center), "bathymetry.level",
          "bathymetry parameters must be finite");
  if (b.profile == "gaussian_bump") require(b.width > 0.0, "bathymetry.width", "width must be positive");
  if (b.profile == "sampled") {
    require(static_cast<int>(b.values.size()) == c.grid.cells, "bathymetry.values",
            "sampled profile needs one value per cell");
    for (double v : b.values) require(finite(v), "bathymetry.values", "values must be finite");
  }
  require(b.motion == "static" || b.motion == "sinusoid" || b.motion == "gaussian_pulse",
          "bathymetry.motion",
          "unknown motion '" + b.motion + "' (expected static, sinusoid or gaussian_pulse)");
  if (b.motion == "gaussian_pulse")
    require(b.motion_sigma > 0.0, "bathymetry.motion_sigma", "motion_sigma must be positive");

  const auto& s = c.stepping;
  require(s.cfl > 0.0 && s.cfl <= 1.0, "stepping.cfl", "cfl must lie in (0, 1]");
  require(finite(s.t_end) && s.t_end >= 0.0, "stepping.t_end", "t_end must be non-negative");
  require(s.dt_max > 0.0, "stepping.dt_max", "dt_max must be positive");
  if (s.fixed_dt) require(finite(*s.fixed_dt) && *s.fixed_dt > 0.0, "stepping.fixed_dt",
                          "fixed_dt must be positive");

  require(finite(c.output.snapshot_interval) && c.output.snapshot_interval >= 0.0,
          "output.snapshot_interval", "snapshot_interval must be non-negative");
  require(!c.output.dir.empty(), "output.dir", "output directory must not be empty");
  for (const auto& f : c.output.fields)
    require(f == "w_bottom" || f == "w_surface" || f == "p_bottom", "output.fields",
            "unknown output field '" + f + "' (expected w_bottom, w_surface or p_bottom)");

  if (c.regime) {
    require(c.regime->h > 0.0, "regime.h", "h must be positive");
    require(c.regime->lambda > 0.0, "regime.lambda", "lambda must be positive");
    require(c.regime->a_s >= 0.0, "regime.a_s", "a_s must be non-negative");
    require(c.regime->a_b >= 0.0, "regime.a_b", "a_b must be non-negative");
  }

  const auto& ic = c.initial;
  switch (ic.kind) {
    case InitialKind::LakeAtRest:
      require(finite(ic.eta0), "initial.eta0", "eta0 must be finite");
      break;
    case InitialKind::DamBreak: {
      require(finite(ic.eta_left) && finite(ic.eta_right) && finite(ic.x0), "initial.eta_left",
              "dam-break levels must be finite");
      // The static part of the bottom is enough here: H = eta - z_b at t = 0.
      const Problem problem = make_problem(c);
      for (int i = 0; i < c.grid.cells; ++i) {
        const double x = problem.grid.x(i);
        const double eta = x < ic.x0 ? ic.eta_left : ic.eta_right;
        require(eta - problem.bathy.z(x, 0.0) >= 0.0, x < ic.x0 ? "initial.eta_left" : "initial.eta_right",
                "dam-break level below the bottom gives a negative water height at x=" +
                    format_double(x));
      }
      break;
    }
    case InitialKind::MonochromaticWave:
      require(ic.k > 0.0 && finite(ic.k), "initial.k", "wavenumber must be positive");
      require(finite(ic.amplitude), "initial.amplitude", "amplitude must be finite");
      break;
    case InitialKind::GaussianHump:
      require(ic.width > 0.0, "initial.width", "width must be positive");
      require(finite(ic.amplitude), "initial.amplitude", "amplitude must be finite");
      break;
    case InitialKind::Manufactured: {
      require(ic.id == "hydrostatic" || ic.id == "nonhydro1", "initial.id",
              "unknown manufactured solution '" + ic.id + "' (expected hydrostatic or nonhydro1)");
      const auto m = ManufacturedSolution::from_id(ic.id);
      require(c.grid.boundary == Boundary::Periodic, "grid.boundary",
              "manufactured solutions need a periodic grid");
      const double period = 2.0 * std::numbers::pi / m.k;
      require(std::abs((c.grid.x_max - c.grid.x_min) / period -
                       std::round((c.grid.x_max - c.grid.x_min) / period)) < 1e-12,
              "grid.x_max", "domain length must be a multiple of the manufactured wavelength");
      break;
    }
  }
  if (ic.kind == InitialKind::MonochromaticWave || ic.kind == InitialKind::GaussianHump) {
    require(finite(ic.eta0), "initial.eta0", "eta0 must be finite");
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto kv = [&o](const char* key, const std::string& v) { o << key << " = " << v << "\n"; };
  auto kd = [&kv](const char* key, double v) { kv(key, format_double(v)); };

  o << "[grid]\n";
  kd("x_min", c.grid.x_min);
  kd("x_max", c.grid.x_max);
  kv("cells", std::to_string(c.grid.cells));
  kv("boundary", to_string(c.grid.boundary));

  o << "\n[physics]\n";
  kv("tier", to_string(c.physics.tier));
  kd("g", c.physics.g);
  kd("nu", c.physics.nu);
  kd("k_l", c.physics.k_l);
  kd("k_t", c.physics.k_t);
  kv("p_atm", c.physics.p_atm);
  kd("p_atm_slope", c.physics.p_atm_slope);
  kd("p_atm_offset", c.physics.p_atm_offset);

  o << "\n[bathymetry]\n";
  kv("profile", c.bathymetry.profile);
  kd("level", c.bathymetry.level);
  kd("center", c.bathymetry.center);
  kd("width", c.bathymetry.width);
  kd("amplitude", c.bathymetry.amplitude);
  std::vector<std::string> values;
  for (double v : c.bathymetry.values) values.push_back(format_double(v));
  kv("values", join(values));
  kv("motion", c.bathymetry.motion);
  kd("motion_amplitude", c.bathymetry.motion_amplitude);
  kd("motion_frequency", c.bathymetry.motion_frequency);
  kd("motion_phase", c.bathymetry.motion_phase);
  kd("motion_t0", c.bathymetry.motion_t0);
  kd("motion_sigma", c.bathymetry.motion_sigma);

  o << "\n[initial]\n";
  kv("kind", to_string(c.initial.kind));
  kd("eta0", c.initial.eta0);
  kd("eta_left", c.initial.eta_left);
  kd("eta_right", c.initial.eta_right);
  kd("x0", c.initial.x0);
  kd("amplitude", c.initial.amplitude);
  kd("k", c.initial.k);
  kd("center", c.initial.center);
  kd("width", c.initial.width);
  kv("id", c.initial.id);

  o << "\n[stepping]\n";
  kd("cfl", c.stepping.cfl);
  kd("t_end", c.stepping.t_end);
  kd("dt_max", c.stepping.dt_max);
  if (c.stepping.fixed_dt) kd("fixed_dt", *c.stepping.fixed_dt);
  kv("reconstruction", to_string(c.stepping.reconstruction));

  o << "\n[output]\n";
  kv("dir", c.output.dir);
  kd("snapshot_interval", c.output.snapshot_interval);
  kv("fields", join(c.output.fields));
  kv("timeseries", c.output.timeseries ? "true" : "false");

  if (c.regime) {
    o << "\n[regime]\n";
    kd("h", c.regime->h);
    kd("lambda", c.regime->lambda);
    kd("a_s", c.regime->a_s);
    kd("a_b", c.regime->a_b);
  }
  return o.str();
}

void write_config(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file '" + path + "'");
  out << format_config(config);
  if (!out) throw std::runtime_error("error writing config file '" + path + "'");
}

// ---------------------------------------------------------------------------
// Problem and initial state

Problem make_problem(const ScenarioConfig& c) {
  Grid grid(c.grid.x_min, c.grid.x_max, c.grid.cells, c.grid.boundary);
  SchemeOptions scheme;
  scheme.reconstruction = c.stepping.reconstruction;

  if (c.initial.kind == InitialKind::Manufactured) {
    const auto m = ManufacturedSolution::from_id(c.initial.id);
    scheme.source = [m](double x, double t) { return m.source(x, t); };
    return Problem{grid, m.bathymetry(), m.params(), m.tier(), scheme};
  }

  const auto& b = c.bathymetry;
  SpatialProfile profile = FlatProfile{b.level};
  if (b.profile == "gaussian_bump") {
    profile = GaussianBumpProfile{b.center, b.width, b.amplitude, b.level};
  } else if (b.profile == "sampled") {
    profile = SampledProfile{grid.x_min(), grid.dx(), b.values, grid.boundary() == Boundary::Periodic};
  }
  BottomMotion motion = StaticMotion{};
  if (b.motion == "sinusoid") {
    motion = SinusoidMotion{b.motion_amplitude, b.motion_frequency, b.motion_phase};
  } else if (b.motion == "gaussian_pulse") {
    motion = GaussianPulseMotion{b.motion_amplitude, b.motion_t0, b.motion_sigma};
  }

  PhysicalParams params;
  params.g = c.physics.g;
  params.nu = c.physics.nu;
  params.k_l = c.physics.k_l;
  params.k_t = c.physics.k_t;
  if (c.physics.p_atm == "gradient")
    params.p_atm = GradientPressure{c.physics.p_atm_slope, c.physics.p_atm_offset};
  return Problem{grid, BathymetryField(profile, motion), params, c.physics.tier, scheme};
}

FlowState make_initial_state(const ScenarioConfig& c, const Problem& problem) {
  const Grid& grid = problem.grid;
  const auto n = static_cast<std::size_t>(grid.n_cells());
  const auto& ic = c.initial;
  if (ic.kind == InitialKind::Manufactured)
    return ManufacturedSolution::from_id(ic.id).state(grid, 0.0);

  const auto z = problem.bathy.sample(grid, 0.0);
  std::vector<double> eta(n, ic.eta0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(static_cast<int>(i));
    switch (ic.kind) {
      case InitialKind::DamBreak:
        eta[i] = x < ic.x0 ? ic.eta_left : ic.eta_right;
        break;
      case InitialKind::MonochromaticWave: {
        const double disturbance = ic.amplitude * std::cos(ic.k * (x - grid.x_min()));
        eta[i] = ic.eta0 + disturbance;
        // Linear right-going wave: u = c eta' / h with the local still depth.
        const double h = ic.eta0 - z[i];
        if (h > kDryThreshold)
          u[i] = analytic_phase_speed(problem.tier, problem.params.g, h, ic.k) * disturbance / h;
        break;
      }
      case InitialKind::GaussianHump: {
        const double r = (x - ic.center) / ic.width;
        eta[i] = ic.eta0 + ic.amplitude * std::exp(-0.5 * r * r);
        break;
      }
      default:
        break;
    }
  }
  std::vector<double> H = heights_from_surface(eta, problem.bathy, grid, 0.0);
  std::vector<double> q(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i] = H[i] >= kDryThreshold ? H[i] * u[i] : 0.0;
  return FlowState(0.0, std::move(H), std::move(q));
}

StepControls make_controls(const ScenarioConfig& c) {
  StepControls controls;
  controls.cfl = c.stepping.cfl;
  controls.t_end = c.stepping.t_end;
  controls.dt_max = c.stepping.dt_max;
  controls.fixed_dt = c.stepping.fixed_dt;
  return controls;
}

RegimeVerdict regime_verdict(const ScenarioConfig& c) {
  RegimeSpec scales;
  if (c.regime) {
    scales = *c.regime;
  } else {
    const Problem problem = make_problem(c);
    const FlowState state = make_initial_state(c, problem);
    const auto z = problem.bathy.sample(problem.grid, 0.0);
    const auto eta = free_surface(state, problem.bathy, problem.grid);
    double depth = 0.0;
    int wet = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (!state.wet(i)) continue;
      depth += state.H[i];
      ++wet;
    }
    scales.h = wet > 0 ? depth / wet : 0.0;
    scales.lambda = problem.grid.length();
    double reference = c.initial.eta0;
    switch (c.initial.kind) {
      case InitialKind::MonochromaticWave:
        scales.lambda = 2.0 * std::numbers::pi / c.initial.k;
        break;
      case InitialKind::GaussianHump:
        scales.lambda = 2.0 * std::numbers::pi * c.initial.width;
        break;
      case InitialKind::DamBreak:
        reference = std::min(c.initial.eta_left, c.initial.eta_right);
        break;
      case InitialKind::Manufactured: {
        const auto m = ManufacturedSolution::from_id(c.initial.id);
        reference = m.z_b + m.H0;
        scales.lambda = 2.0 * std::numbers::pi / m.k;
        break;
      }
      default:
        break;
    }
    double amp = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
      if (state.wet(i)) amp = std::max(amp, std::abs(eta[i] - reference));
    scales.a_s = amp;
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    scales.a_b = *hi - *lo;
  }

  RegimeVerdict v;
  if (!(scales.a_s > 0.0) || !(scales.h > 0.0)) {
    v.verdict = "Unclassified";
    return v;
  }
  v.scales = ScalingRegime::from_scales(scales.h, scales.lambda, scales.a_s, scales.a_b,
                                        c.physics.g, c.physics.nu, c.physics.k_l);
  v.verdict = to_string(classify_regime(*v.scales));
  return v;
}

// ---------------------------------------------------------------------------
// Writers

SnapshotFields SnapshotFields::from_names(const std::vector<std::string>& names) {
  SnapshotFields f;
  for (const auto& n : names) {
    if (n == "w_bottom") f.w_bottom = true;
    else if (n == "w_surface") f.w_surface = true;
    else if (n == "p_bottom") f.p_bottom = true;
    else throw std::invalid_argument("unknown snapshot field '" + n + "'");
  }
  return f;
}

void write_snapshot(std::ostream& out, const FlowState& state, const Problem& problem,
                    const SnapshotFields& fields, const std::vector<double>& accel) {
  const Grid& grid = problem.grid;
  state.validate(grid);
  const auto eta = free_surface(state, problem.bathy, grid);
  const bool derived = fields.w_bottom || fields.w_surface || fields.p_bottom;
  std::vector<ColumnState> cols;
  if (derived) cols = column_states(state, problem.bathy, problem.params, grid, accel);

  out << "# t=" << format_double(state.t) << " tier=" << to_string(problem.tier)
      << " build=" << build_description() << "\n";
  out << "x,H,u_bar,eta,z_b";
  if (fields.w_bottom) out << ",w_bottom";
  if (fields.w_surface) out << ",w_surface";
  if (fields.p_bottom) out << ",p_bottom";
  out << "\n";
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double z = eta[i] - state.H[i];
    out << format_double(grid.x(static_cast<int>(i))) << ',' << format_double(state.H[i]) << ','
        << format_double(state.velocity(i)) << ',' << format_double(eta[i]) << ','
        << format_double(z);
    if (derived) {
      const ColumnState& col = cols[i];
      if (fields.w_bottom) out << ',' << format_double(vertical_velocity(col, col.z_b));
      if (fields.w_surface) out << ',' << format_double(vertical_velocity(col, col.eta()));
      if (fields.p_bottom) {
        double p = pressure_hydrostatic(col, col.z_b);
        if (is_dispersive(problem.tier) && state.wet(i))
          p = pressure_nonhydrostatic(col, col.z_b, problem.tier);
        out << ',' << format_double(p);
      }
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("error writing snapshot");
}

void write_snapshot(const std::string& path, const FlowState& state, const Problem& problem,
                    const SnapshotFields& fields, const std::vector<double>& accel) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open snapshot file '" + path + "'");
  write_snapshot(out, state, problem, fields, accel);
}

void write_timeseries(std::ostream& out, const std::vector<EnergyReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("time series needs at least one report");
  out << "t,mass,momentum,E_h,E_ext,dissipation_rate,budget_residual\n";
  for (const auto& r : reports) {
    out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.momentum)
        << ',' << format_double(r.E_h) << ',' << format_double(r.E_ext) << ','
        << format_double(r.dissipation_rate) << ',' << format_double(r.budget_residual) << "\n";
  }
  if (!out) throw std::runtime_error("error writing time series");
}

void write_timeseries(const std::string& path, const std::vector<EnergyReport>& reports) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open time-series file '" + path + "'");
  write_timeseries(out, reports);
}

std::string format_manifest(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["build"] = build_description();
  j["tier"] = to_string(m.config.physics.tier);
  nlohmann::ordered_json regime;
  regime["verdict"] = m.regime.verdict;
  if (m.regime.scales) {
    const auto& s = *m.regime.scales;
    regime["h"] = s.h;
    regime["lambda"] = s.lambda;
    regime["a_s"] = s.a_s;
    regime["a_b"] = s.a_b;
    regime["epsilon"] = s.epsilon;
    regime["delta"] = s.delta;
    regime["ursell"] = s.ursell;
  }
  j["regime"] = regime;
  j["seed"] = m.seed ? nlohmann::ordered_json(*m.seed) : nlohmann::ordered_json(nullptr);
  j["steps"] = m.steps;
  j["t_final"] = m.t_final;
  j["mass_drift"] = m.mass_drift;
  j["energy_drift"] = m.energy_drift;
  j["positivity_violations"] = m.positivity_violations;
  j["wall_seconds"] = m.wall_seconds;
  j["snapshots"] = m.snapshots;
  j["timeseries"] = m.timeseries;
  j["config"] = format_config(m.config);
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open manifest file '" + path + "'");
  out << format_manifest(manifest);
  if (!out) throw std::runtime_error("error writing manifest");
}

}  // namespace nhsw
