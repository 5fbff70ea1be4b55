#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hykin/errors.hpp"
#include "hykin/hybrid.hpp"
#include "hykin/scenarios.hpp"

namespace hykin {

/// Environment variable that overrides the output directory.
inline constexpr const char* kOutputDirEnv = "HYKIN_OUTPUT_DIR";

/// Parsed run configuration. Unset optionals keep the scenario defaults.
struct RunConfig {
  std::string scenario;
  std::optional<double> epsilon;
  std::optional<int> nx, ny, nv, order;
  std::optional<double> vcut, dt, t_final;
  double eta0 = 1e-3;
  double delta0 = 1e-3;
  std::optional<double> forced_band;
  Mode mode = Mode::Hybrid;
  std::string output_dir = "output";
  long snapshot_interval = 0;
  bool deterministic = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigurationError("invalid number for '" + key + "': '" + v + "'");
  return x;
}

inline long parse_long(const std::string& key, const std::string& v) {
  long x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigurationError("invalid integer for '" + key + "': '" + v + "'");
  return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
  const long x = parse_long(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigurationError("integer out of range for '" + key + "'");
  return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigurationError("invalid boolean for '" + key + "': '" + v + "'");
}

inline Mode parse_mode(const std::string& v) {
  if (v == "hybrid") return Mode::Hybrid;
  if (v == "full_kinetic") return Mode::FullKinetic;
  if (v == "full_fluid") return Mode::FullFluid;
  throw ConfigurationError("invalid value for 'mode': '" + v + "' (hybrid, full_kinetic, full_fluid)");
}

}  // namespace detail

/// Apply one key=value setting; throws ConfigurationError naming the key.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  auto positive = [&](double x) {
    if (!(x > 0.0)) throw ConfigurationError("'" + key + "' must be positive");
    return x;
  };
  auto non_negative = [&](double x) {
    if (x < 0.0) throw ConfigurationError("'" + key + "' must be non-negative");
    return x;
  };
  if (key == "scenario") {
    if (value != "evap_weak" && value != "evap_strong" && value != "riemann2d" && value != "ghost2d")
      throw ConfigurationError("unknown scenario '" + value + "' (evap_weak, evap_strong, riemann2d, ghost2d)");
    c.scenario = value;
  } else if (key == "epsilon") {
    c.epsilon = positive(parse_double(key, value));
  } else if (key == "nx") {
    c.nx = static_cast<int>(positive(parse_int(key, value)));
  } else if (key == "ny") {
    c.ny = static_cast<int>(positive(parse_int(key, value)));
  } else if (key == "nv") {
    const int n = parse_int(key, value);
    if (n < 2) throw ConfigurationError("'nv' must be at least 2");
    c.nv = n;
  } else if (key == "vcut") {
    c.vcut = positive(parse_double(key, value));
  } else if (key == "order") {
    const int k = parse_int(key, value);
    if (k < 0 || k > 8) throw ConfigurationError("'order' must be in [0, 8]");
    c.order = k;
  } else if (key == "dt") {
    c.dt = non_negative(parse_double(key, value));
  } else if (key == "t_final") {
    c.t_final = non_negative(parse_double(key, value));
  } else if (key == "eta0") {
    c.eta0 = positive(parse_double(key, value));
  } else if (key == "delta0") {
    c.delta0 = positive(parse_double(key, value));
  } else if (key == "forced_band") {
    c.forced_band = non_negative(parse_double(key, value));
  } else if (key == "mode") {
    c.mode = parse_mode(value);
  } else if (key == "output_dir") {
    if (value.empty()) throw ConfigurationError("'output_dir' must not be empty");
    c.output_dir = value;
  } else if (key == "snapshot_interval") {
    const long n = parse_long(key, value);
    if (n < 0) throw ConfigurationError("'snapshot_interval' must be non-negative");
    c.snapshot_interval = n;
  } else if (key == "deterministic") {
    c.deterministic = parse_bool(key, value);
  } else {
    throw ConfigurationError("unknown key '" + key + "'");
  }
}

/// Split "key=value" (whitespace around either part is ignored).
inline std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigurationError("expected key=value, got '" + text + "'");
  std::string key = detail::trim(text.substr(0, eq)), value = detail::trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigurationError("empty key in '" + text + "'");
  return {key, value};
}

/// Check cross-key constraints that do not need the scenario to be built.
inline void validate(const RunConfig& c) {
  if (c.scenario.empty()) throw ConfigurationError("missing required key 'scenario'");
  const bool one_d = c.scenario == "evap_weak" || c.scenario == "evap_strong";
  if (one_d && c.ny) throw ConfigurationError("'ny' is not valid for 1D scenario '" + c.scenario + "'");
  if (one_d && c.nx && *c.nx % 4 != 0) throw ConfigurationError("'nx' must be divisible by 4 for evaporation");
}

/// Parse the flat key=value format: one pair per line, '#' starts a comment.
inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      const auto [k, v] = split_assignment(line);
      apply_setting(c, k, v);
    } catch (const ConfigurationError& e) {
      throw ConfigurationError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Scenario defaults with the config's overrides applied.
template <int Dim>
ScenarioSpec<Dim> scenario_from_config(const RunConfig& c) {
  ScenarioSpec<Dim> s;
  if constexpr (Dim == 1) {
    s = build_evaporation(c.scenario == "evap_weak", c.nx.value_or(40), c.epsilon.value_or(1e-3));
  } else {
    const int n = c.nx.value_or(c.scenario == "riemann2d" ? 80 : 40);
    if (c.scenario == "riemann2d") {
      s = build_riemann2d(n, c.epsilon.value_or(1e-2));
    } else {
      s = build_ghost2d(n, c.epsilon.value_or(0.02));
    }
    if (c.ny) {
      const Axis& ax = s.mesh.axis(1);
      s.mesh = Mesh<2>({s.mesh.axis(0), Axis::uniform(ax.lower(), ax.upper(), *c.ny)});
    }
  }
  if (c.nv) s.nv = *c.nv;
  if (c.vcut) s.vcut = *c.vcut;
  if (c.order) s.order.fill(*c.order);
  if (c.dt) s.dt = *c.dt;
  if (c.t_final) s.t_final = *c.t_final;
  if (c.forced_band) s.forced_band = *c.forced_band;
  s.mode = c.mode;
  s.validate();
  return s;
}

/// One row per cell node.
struct SnapshotRow {
  double t, x, y, rho, u1, u2, T, p;
  char region;
};

struct Snapshot {
  std::vector<SnapshotRow> rows;
};

inline constexpr const char* kSnapshotHeader = "t,x,y,rho,u1,u2,T,p,region";

namespace detail {

inline void put(std::string& out, double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, r.ptr);
}

}  // namespace detail

template <int Dim>
Snapshot make_snapshot(const HybridState<Dim>& s, const DgSpace<Dim>& space) {
  Snapshot snap;
  snap.rows.reserve(space.dofs());
  for (int c = 0; c < space.cells(); ++c)
    for (int n = 0; n < space.nodes_per_cell(); ++n) {
      const auto x = space.node_position(c, n);
      const Moments<Dim> m = Moments<Dim>::from_conserved(conserved_at(s.U, space.dof(c, n)));
      SnapshotRow r{};
      r.t = s.t;
      r.x = x[0];
      r.y = Dim == 2 ? x[Dim - 1] : 0.0;
      r.rho = m.rho;
      r.u1 = m.u[0];
      r.u2 = Dim == 2 ? m.u[Dim - 1] : 0.0;
      r.T = m.T;
      r.p = m.pressure();
      r.region = static_cast<char>(s.regions.label[c]);
      snap.rows.push_back(r);
    }
  return snap;
}

/// CSV with shortest round-trip decimal representation of every value.
inline void write_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
  std::string out = std::string(kSnapshotHeader) + "\n";
  for (const auto& r : snap.rows) {
    for (double v : {r.t, r.x, r.y, r.rho, r.u1, r.u2, r.T, r.p}) {
      detail::put(out, v);
      out += ',';
    }
    out += r.region;
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << out;
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(f, line) || line != kSnapshotHeader) throw Error("bad snapshot header in '" + path.string() + "'");
  Snapshot snap;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    SnapshotRow r{};
    double* fields[] = {&r.t, &r.x, &r.y, &r.rho, &r.u1, &r.u2, &r.T, &r.p};
    std::size_t pos = 0;
    for (double* fld : fields) {
      const auto comma = line.find(',', pos);
      if (comma == std::string::npos) throw Error("short snapshot row");
      *fld = detail::parse_double("snapshot", line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (line.size() != pos + 1) throw Error("bad region column");
    r.region = line[pos];
    snap.rows.push_back(r);
  }
  return snap;
}

inline constexpr const char* kDiagnosticsHeader =
    "step,t,mass,momentum_x,momentum_y,energy,kinetic_cells,kinetic_fraction,kinetic_volume_fraction";

template <int Dim>
std::string diagnostics_line(const Diagnostics<Dim>& d) {
  std::string out = std::to_string(d.step) + ",";
  detail::put(out, d.t);
  out += ',';
  detail::put(out, d.total[0]);
  out += ',';
  detail::put(out, d.total[1]);
  out += ',';
  detail::put(out, Dim == 2 ? d.total[Dim] : 0.0);
  out += ',';
  detail::put(out, d.total[Dim + 1]);
  out += ',' + std::to_string(d.kinetic_cells) + ',';
  detail::put(out, d.kinetic_fraction);
  out += ',';
  detail::put(out, d.kinetic_volume_fraction);
  return out;
}

/// Outcome of a run, for callers that want more than the exit status.
struct RunResult {
  int status = 0;
  long steps = 0;
  double t = 0.0;
  int snapshots = 0;
  std::string message;
};

template <int Dim>
RunResult run_scenario(const ScenarioSpec<Dim>& spec, const RunConfig& config, std::ostream& log) {
  RunResult res;
  HybridConfig hc;
  hc.epsilon = spec.epsilon;
  hc.mode = spec.mode;
  hc.decomposition.eta0 = config.eta0;
  hc.decomposition.delta0 = config.delta0;
  hc.decomposition.forced_band = spec.forced_band;
  HybridSolver<Dim> solver(spec.space(), spec.grid(), spec.bc, hc);
  HybridState<Dim> state = solver.initialize(spec.initial);
  const double dt = spec.dt > 0.0 ? spec.dt : solver.default_dt(state);
  solver.set_dt(dt);
  solver.check_cfl(state);
  if (spec.mode == Mode::Hybrid && spec.epsilon >= 0.1)
    log << "warning: epsilon >= 0.1 leaves few fluid cells; mode=full_kinetic is recommended\n";

  const std::filesystem::path dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream diag(dir / "diagnostics.csv", std::ios::binary);
  if (!diag) throw Error("cannot write diagnostics in '" + dir.string() + "'");
  diag << kDiagnosticsHeader << '\n';

  auto snapshot = [&] {
    std::ostringstream name;
    name << "snapshot_" << std::setw(8) << std::setfill('0') << state.step << ".csv";
    write_snapshot(make_snapshot(state, solver.space()), dir / name.str());
    ++res.snapshots;
  };
  auto record = [&] { diag << diagnostics_line(solver.diagnostics(state)) << '\n'; };

  record();
  snapshot();
  long last_snapshot = 0;
  const double tol = 1e-12 * std::max(1.0, spec.t_final);
  while (state.t < spec.t_final - tol) {
    const double remaining = spec.t_final - state.t;
    solver.set_dt(remaining < dt * (1.0 + 1e-12) ? remaining : dt);
    solver.step(state);
    record();
    if (config.snapshot_interval > 0 && state.step % config.snapshot_interval == 0) {
      snapshot();
      last_snapshot = state.step;
    }
  }
  if (last_snapshot != state.step) snapshot();
  diag.flush();
  res.steps = state.step;
  res.t = state.t;
  log << "done: " << state.step << " steps, t=" << state.t << ", kinetic cells "
      << state.regions.count(Region::Kinetic) << "/" << solver.space().cells() << ", output in " << dir.string()
      << "\n";
  return res;
}

/// Run a parsed configuration. Exit status: 0 success, 1 configuration error,
/// 2 solver failure.
inline RunResult run(RunConfig config, std::ostream& log = std::cerr) {
  RunResult res;
  try {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) config.output_dir = env;
    validate(config);
    if (config.scenario == "evap_weak" || config.scenario == "evap_strong") {
      res = run_scenario(scenario_from_config<1>(config), config, log);
    } else {
      res = run_scenario(scenario_from_config<2>(config), config, log);
    }
  } catch (const ConfigurationError& e) {
    res.status = 1;
    res.message = std::string("configuration error: ") + e.what();
  } catch (const ParameterError& e) {
    res.status = 1;
    res.message = std::string("configuration error: ") + e.what();
  } catch (const TimeStepFailure& e) {
    res.status = 2;
    res.message = std::string("solver failure at step ") + std::to_string(e.step()) +
                  (e.cell() >= 0 ? ", cell " + std::to_string(e.cell()) : std::string()) + ": " + e.what();
  } catch (const Error& e) {
    res.status = 2;
    res.message = std::string("solver failure: ") + e.what();
  }
  if (res.status != 0) log << res.message << "\n";
  return res;
}

}  // namespace hykin
