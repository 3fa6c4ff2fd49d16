#pragma once

// Run configurations, single runs, resolution sweeps and plot-data export.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "weno/diagnostics.hpp"
#include "weno/errors.hpp"
#include "weno/mapping.hpp"
#include "weno/mesh.hpp"
#include "weno/problems.hpp"
#include "weno/solver.hpp"

namespace weno {

// ---------------------------------------------------------------------------
// Small text helpers

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

inline long long parse_int(const std::string& text, const std::string& key) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') throw ConfigError(key + ": not an integer: '" + text + "'", key);
  return v;
}

inline bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  throw ConfigError(key + ": expected on/off, got '" + text + "'", key);
}

}  // namespace detail

/// Shortest decimal text that parses back to the same double.
inline std::string format_shortest(double v) {
  char buf[40];
  for (int p = 1; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Scheme descriptors: `name` or `name:key=value:key=value`

inline std::vector<std::string> scheme_names() { return {"js", "m", "pm", "im", "mip-acmk", "mop-acmk"}; }

/// Builds a validated spec from a scheme name and its parameter keys. Keys
/// that do not belong to the scheme are rejected.
inline MappingSpec build_scheme(const std::string& name, const std::map<std::string, std::string>& params) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw ConfigError("key '" + k + "' does not apply to scheme " + name, k);
    }
  };
  auto real = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_double(it->second, key);
  };
  auto integer = [&](const char* key, int fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : static_cast<int>(detail::parse_int(it->second, key));
  };

  MappingSpec spec;
  if (name == "js") {
    allow({});
    spec = mapping::Js{};
  } else if (name == "m") {
    allow({});
    spec = mapping::M{};
  } else if (name == "pm" || name == "pm6") {
    allow({"k"});
    spec = mapping::Pm{integer("k", 6)};
  } else if (name == "im") {
    allow({"k", "A"});
    spec = mapping::Im{integer("k", 2), real("A", 0.1)};
  } else if (name == "mip-acmk") {
    allow({"cfs0", "cfs1", "cfs2", "k0", "k1", "k2"});
    MipAcmkParams p = default_mip_params();
    for (int s = 0; s < 3; ++s) {
      p.cfs[s] = real(("cfs" + std::to_string(s)).c_str(), p.cfs[s]);
      p.k[s] = real(("k" + std::to_string(s)).c_str(), p.k[s]);
    }
    spec = mapping::MipAcmk{p};
  } else if (name == "mop-acmk") {
    allow({"cfs0", "cfs1", "k0", "k1"});
    MopAcmkParams p;
    p.cfs0 = real("cfs0", p.cfs0);
    p.cfs1 = real("cfs1", p.cfs1);
    p.k0 = real("k0", p.k0);
    p.k1 = real("k1", p.k1);
    spec = mapping::MopAcmk{p};
  } else {
    throw ConfigError("unknown scheme '" + name + "'", "scheme");
  }
  validate(spec);
  return spec;
}

inline MappingSpec parse_scheme_descriptor(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.empty() || parts[0].empty()) throw ConfigError("empty scheme descriptor", "schemes");
  std::map<std::string, std::string> params;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ConfigError("bad scheme parameter '" + parts[i] + "'", "schemes");
    if (!params.emplace(parts[i].substr(0, eq), parts[i].substr(eq + 1)).second) {
      throw ConfigError("duplicate scheme parameter '" + parts[i] + "'", "schemes");
    }
  }
  return build_scheme(parts[0], params);
}

/// Canonical descriptor listing every parameter.
inline std::string format_scheme_descriptor(const MappingSpec& spec) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, mapping::Js>) return "js";
        if constexpr (std::is_same_v<T, mapping::M>) return "m";
        if constexpr (std::is_same_v<T, mapping::Pm>) return "pm:k=" + std::to_string(g.k);
        if constexpr (std::is_same_v<T, mapping::Im>) {
          return "im:k=" + std::to_string(g.k) + ":A=" + format_shortest(g.A);
        }
        if constexpr (std::is_same_v<T, mapping::MipAcmk>) {
          std::string s = "mip-acmk";
          for (int i = 0; i < 3; ++i) s += ":cfs" + std::to_string(i) + "=" + format_shortest(g.params.cfs[i]);
          for (int i = 0; i < 3; ++i) s += ":k" + std::to_string(i) + "=" + format_shortest(g.params.k[i]);
          return s;
        }
        if constexpr (std::is_same_v<T, mapping::MopAcmk>) {
          const auto& p = g.params;
          return "mop-acmk:cfs0=" + format_shortest(p.cfs0) + ":cfs1=" + format_shortest(p.cfs1) +
                 ":k0=" + format_shortest(p.k0) + ":k1=" + format_shortest(p.k1);
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  std::string problem;
  Preset preset = Preset::paper;
  std::vector<MappingSpec> schemes;
  /// Empty: use the problem's registered resolutions.
  std::vector<int> resolutions;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<DtMode> dt_mode;
  /// Overrides the problem's registered epsilon.
  std::optional<double> eps;
  bool nonop = false;
  ScanSchedule nonop_records = ScanSchedule::final_step_first_stage;
  bool trace = false;
  std::int64_t trace_every = 0;
  bool overshoot = true;
  InterfaceAverage average = InterfaceAverage::arithmetic;
  std::optional<std::string> reference;
  std::string output = "out";
  std::int64_t progress = 0;
  bool write_solution = true;

  bool operator==(const RunConfig&) const = default;
};

inline const char* preset_name(Preset p) { return p == Preset::paper ? "paper" : "desk"; }

inline const char* schedule_name(ScanSchedule s) {
  switch (s) {
    case ScanSchedule::every_stage:
      return "all";
    case ScanSchedule::end_state:
      return "end";
    case ScanSchedule::final_step_first_stage:
      break;
  }
  return "final";
}

/// Problem spec with the config's overrides applied.
inline ProblemSpec resolved_problem(const RunConfig& cfg) {
  ProblemSpec p = registry_lookup(cfg.problem, cfg.preset);
  if (!cfg.resolutions.empty()) p.resolutions = cfg.resolutions;
  if (cfg.t_end) p.t_end = *cfg.t_end;
  if (cfg.cfl) p.stepping.cfl = *cfg.cfl;
  if (cfg.dt_mode) p.stepping.mode = *cfg.dt_mode;
  if (cfg.eps) p.eps = *cfg.eps;
  p.stepping.t_end = p.t_end;
  return p;
}

/// Parses flat `key=value` lines (whitespace separated pairs are accepted
/// too) with `#` comments. Unknown keys, duplicates and out-of-range values
/// raise ConfigError naming the key.
inline RunConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + tok + "'");
      pairs.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
  }

  RunConfig cfg;
  std::map<std::string, std::string> scheme_params;
  std::optional<std::string> scheme;
  std::optional<std::string> schemes;
  std::map<std::string, bool> seen;
  const std::vector<std::string> scheme_keys{"k", "A", "cfs0", "cfs1", "cfs2", "k0", "k1", "k2"};

  for (const auto& [key, value] : pairs) {
    if (seen[key]) throw ConfigError("duplicate key '" + key + "'", key);
    seen[key] = true;
    if (key == "problem") {
      cfg.problem = value;
    } else if (key == "preset") {
      if (value == "paper") {
        cfg.preset = Preset::paper;
      } else if (value == "desk") {
        cfg.preset = Preset::desk;
      } else {
        throw ConfigError("preset must be paper or desk", key);
      }
    } else if (key == "scheme") {
      scheme = value;
    } else if (key == "schemes") {
      schemes = value;
    } else if (std::find(scheme_keys.begin(), scheme_keys.end(), key) != scheme_keys.end()) {
      scheme_params[key] = value;
    } else if (key == "N") {
      for (const auto& item : detail::split(value, ',')) {
        const long long n = detail::parse_int(item, key);
        if (n < kMinCells || n > 1 << 24) throw ConfigError("N out of range", key);
        cfg.resolutions.push_back(static_cast<int>(n));
      }
    } else if (key == "cfl") {
      cfg.cfl = parse_double(value, key);
      if (!(*cfg.cfl > 0.0) || !std::isfinite(*cfg.cfl)) throw ConfigError("cfl must be positive", key);
    } else if (key == "t_end") {
      cfg.t_end = parse_double(value, key);
      if (!(*cfg.t_end >= 0.0) || !std::isfinite(*cfg.t_end)) throw ConfigError("t_end must be >= 0", key);
    } else if (key == "dt_mode") {
      if (value == "fixed") {
        cfg.dt_mode = DtMode::fixed_cfl;
      } else if (value == "accuracy") {
        cfg.dt_mode = DtMode::accuracy_cfl;
      } else {
        throw ConfigError("dt_mode must be fixed or accuracy", key);
      }
    } else if (key == "eps") {
      cfg.eps = Epsilon(parse_double(value, key)).value();
    } else if (key == "nonop") {
      cfg.nonop = detail::parse_bool(value, key);
    } else if (key == "nonop_records") {
      if (value == "all") {
        cfg.nonop_records = ScanSchedule::every_stage;
      } else if (value == "final") {
        cfg.nonop_records = ScanSchedule::final_step_first_stage;
      } else if (value == "end") {
        cfg.nonop_records = ScanSchedule::end_state;
      } else {
        throw ConfigError("nonop_records must be final, all or end", key);
      }
    } else if (key == "trace") {
      cfg.trace = detail::parse_bool(value, key);
    } else if (key == "trace_every") {
      cfg.trace_every = detail::parse_int(value, key);
      if (cfg.trace_every < 0) throw ConfigError("trace_every must be >= 0", key);
    } else if (key == "overshoot") {
      cfg.overshoot = detail::parse_bool(value, key);
    } else if (key == "average") {
      if (value == "arithmetic") {
        cfg.average = InterfaceAverage::arithmetic;
      } else if (value == "roe") {
        cfg.average = InterfaceAverage::roe;
      } else {
        throw ConfigError("average must be arithmetic or roe", key);
      }
    } else if (key == "reference") {
      cfg.reference = value;
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "progress") {
      cfg.progress = detail::parse_int(value, key);
      if (cfg.progress < 0) throw ConfigError("progress must be >= 0", key);
    } else if (key == "solution") {
      cfg.write_solution = detail::parse_bool(value, key);
    } else {
      throw ConfigError("unknown key '" + key + "'", key);
    }
  }

  if (scheme && schemes) throw ConfigError("give either scheme or schemes, not both", "schemes");
  if (schemes && !scheme_params.empty()) {
    throw ConfigError("scheme parameters go inside the schemes descriptors", scheme_params.begin()->first);
  }
  if (scheme) {
    cfg.schemes.push_back(build_scheme(*scheme, scheme_params));
  } else if (schemes) {
    for (const auto& d : detail::split(*schemes, ',')) cfg.schemes.push_back(parse_scheme_descriptor(d));
  } else if (!scheme_params.empty()) {
    throw ConfigError("scheme parameters given without a scheme", scheme_params.begin()->first);
  }
  if (cfg.reference) {
    bool found = false;
    for (const auto& s : cfg.schemes) found = found || scheme_name(s) == *cfg.reference;
    if (!found) throw ConfigError("reference scheme '" + *cfg.reference + "' is not in the run", "reference");
  }
  if (!cfg.problem.empty()) {
    registry_lookup(cfg.problem, cfg.preset);  // rejects unknown names
  }
  return cfg;
}

/// Canonical text: every key on its own line in a fixed order.
inline std::string format_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "problem=" << cfg.problem << '\n' << "preset=" << preset_name(cfg.preset) << '\n';
  if (!cfg.schemes.empty()) {
    os << "schemes=";
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
      os << (i ? "," : "") << format_scheme_descriptor(cfg.schemes[i]);
    }
    os << '\n';
  }
  if (!cfg.resolutions.empty()) {
    os << "N=";
    for (std::size_t i = 0; i < cfg.resolutions.size(); ++i) os << (i ? "," : "") << cfg.resolutions[i];
    os << '\n';
  }
  if (cfg.cfl) os << "cfl=" << format_shortest(*cfg.cfl) << '\n';
  if (cfg.t_end) os << "t_end=" << format_shortest(*cfg.t_end) << '\n';
  if (cfg.dt_mode) os << "dt_mode=" << (*cfg.dt_mode == DtMode::fixed_cfl ? "fixed" : "accuracy") << '\n';
  if (cfg.eps) os << "eps=" << format_shortest(*cfg.eps) << '\n';
  os << "nonop=" << (cfg.nonop ? "on" : "off") << '\n'
     << "nonop_records=" << schedule_name(cfg.nonop_records) << '\n'
     << "trace=" << (cfg.trace ? "on" : "off") << '\n'
     << "trace_every=" << cfg.trace_every << '\n'
     << "overshoot=" << (cfg.overshoot ? "on" : "off") << '\n'
     << "average=" << (cfg.average == InterfaceAverage::arithmetic ? "arithmetic" : "roe") << '\n';
  if (cfg.reference) os << "reference=" << *cfg.reference << '\n';
  os << "output=" << cfg.output << '\n'
     << "progress=" << cfg.progress << '\n'
     << "solution=" << (cfg.write_solution ? "on" : "off") << '\n';
  return os.str();
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Single runs

struct RunSummary {
  std::string problem;
  std::string scheme;
  std::string descriptor;
  int n = 0;
  double t_end = 0.0;
  double eps = 0.0;
  std::int64_t steps = 0;
  double runtime_s = 0.0;
  std::optional<ErrorNorms> errors;
  std::optional<std::int64_t> nonop_count;
  std::optional<std::size_t> nonop_locations;
  /// Reconstructions that kept the unmapped weights (counted while scanning).
  std::optional<std::int64_t> fallback_count;
  std::optional<Overshoot> overshoot;
  /// Envelope overshoot of the density slice at y = 0.5 (Riemann problem).
  std::optional<double> slice_overshoot;
  /// max |rho(i,j) - rho(j,i)| (Riemann problem).
  std::optional<double> symmetry_error;
  std::optional<bool> positive;
  std::optional<double> min_density;
  std::optional<double> min_pressure;
  std::vector<std::string> files;
};

/// Final state of one run, kept for callers that post-process in memory.
struct RunResult {
  RunSummary summary;
  std::optional<CellField1D> field1d;
  std::optional<CellField2D> field2d;
  std::vector<NonOpRecord> nonop_records;
  std::vector<TraceRecord> trace_records;
};

inline nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json j;
  j["problem"] = s.problem;
  j["scheme"] = s.scheme;
  j["descriptor"] = s.descriptor;
  j["N"] = s.n;
  j["t_end"] = s.t_end;
  j["eps"] = s.eps;
  j["steps"] = s.steps;
  j["runtime_s"] = s.runtime_s;
  if (s.errors) j["errors"] = {{"L1", s.errors->l1}, {"L2", s.errors->l2}, {"Linf", s.errors->linf}};
  if (s.nonop_count) j["nonop_count"] = *s.nonop_count;
  if (s.nonop_locations) j["nonop_locations"] = *s.nonop_locations;
  if (s.fallback_count) j["fallback_count"] = *s.fallback_count;
  if (s.overshoot) j["overshoot"] = {{"over", s.overshoot->over}, {"under", s.overshoot->under}};
  if (s.slice_overshoot) j["slice_overshoot"] = *s.slice_overshoot;
  if (s.symmetry_error) j["symmetry_error"] = *s.symmetry_error;
  if (s.positive) j["positive"] = *s.positive;
  if (s.min_density) j["min_density"] = *s.min_density;
  if (s.min_pressure) j["min_pressure"] = *s.min_pressure;
  j["files"] = s.files;
  return j;
}

/// Density values along the plane y = y0, interpolated linearly between the
/// two rows of cell centers that bracket it.
inline std::vector<double> density_slice(const CellField2D& q, double y0) {
  const Grid2D& g = q.grid();
  const double pos = (y0 - g.y_bottom) / g.dy - 0.5;
  int j0 = static_cast<int>(std::floor(pos));
  j0 = std::clamp(j0, 0, g.ny - 2);
  const double w = std::clamp(pos - j0, 0.0, 1.0);
  std::vector<double> out(g.nx);
  for (int i = 0; i < g.nx; ++i) out[i] = (1.0 - w) * q(0, i, j0) + w * q(0, i, j0 + 1);
  return out;
}

inline double diagonal_symmetry_error(const CellField2D& q) {
  const Grid2D& g = q.grid();
  double worst = 0.0;
  for (int j = 0; j < std::min(g.nx, g.ny); ++j) {
    for (int i = 0; i < j; ++i) worst = std::max(worst, std::abs(q(0, i, j) - q(0, j, i)));
  }
  return worst;
}

inline void write_snapshot_csv(std::ostream& os, const CellField2D& q, double gamma = 1.4) {
  os << "x,y,rho,u,v,p\n";
  const Grid2D& g = q.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec4 w = conserved_to_primitive({q(0, i, j), q(1, i, j), q(2, i, j), q(3, i, j)}, gamma);
      os << format_double(g.xc(i)) << ',' << format_double(g.yc(j));
      for (double v : w) os << ',' << format_double(v);
      os << '\n';
    }
  }
}

inline std::string run_stem(const RunConfig& cfg, const MappingSpec& spec, int n) {
  return cfg.problem + "_" + scheme_name(spec) + "_N" + std::to_string(n);
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'", "output");
  return out;
}

template <class Strategy>
void run_advection(const RunConfig& cfg, const ProblemSpec& prob, Strategy strategy, int n, RunResult& res) {
  const Grid1D grid = build_grid_1d(prob.x_left, prob.x_right, n);
  CellField1D u = ic_profile(prob.profile, grid);
  const Boundaries1D bc{prob.boundary, prob.boundary};
  const Epsilon eps(prob.eps);

  NonOpScanner scanner(grid, cfg.nonop_records);
  TraceRecorder tracer(grid, cfg.trace_every);
  using Obs = ObserverPair<NonOpScanner, TraceRecorder>;
  Obs obs{cfg.nonop ? &scanner : nullptr, cfg.trace ? &tracer : nullptr};
  const RunOptions opts{cfg.progress, 0};

  RunStats stats;
  if (cfg.nonop || cfg.trace) {
    AdvectionSystem<Strategy, Obs> sys{strategy, prob.stepping, bc, eps, &obs};
    stats = advance_to(u, prob.t_end, sys, opts);
  } else {
    AdvectionSystem<Strategy> sys{strategy, prob.stepping, bc, eps};
    stats = advance_to(u, prob.t_end, sys, opts);
  }
  res.summary.steps = stats.steps;
  if (cfg.nonop) {
    fill_ghost(u, bc);
    scanner.scan_end_state(u, strategy, eps, stats.t, stats.steps);
    res.summary.nonop_count = scanner.total_count();
    res.summary.nonop_locations = scanner.unique_locations();
    res.summary.fallback_count = scanner.fallback_count();
    res.nonop_records = scanner.records();
  }
  if (cfg.trace) res.trace_records = tracer.records();
  if (prob.has_exact) res.summary.errors = error_norms(u, exact_advection(prob.profile, prob.t_end, grid));
  if (cfg.overshoot) res.summary.overshoot = overshoot_metric(u, prob.lower, prob.upper);
  res.field1d = std::move(u);
}

template <class Strategy>
void run_euler(const RunConfig& cfg, const ProblemSpec& prob, Strategy strategy, int n, RunResult& res) {
  const Grid2D grid = build_grid_2d(prob.x_left, prob.x_right, n, prob.y_bottom, prob.y_top, n);
  CellField2D q = prob.kind == ProblemKind::riemann2d_c4 ? ic_riemann2d_config4(grid) : ic_shock_vortex(grid);
  EulerSystem<Strategy> sys{strategy, prob.stepping};
  sys.avg = cfg.average;
  sys.eps = Epsilon(prob.eps);
  const RunStats stats = advance_to(q, prob.t_end, sys, RunOptions{cfg.progress, 0});
  res.summary.steps = stats.steps;

  double min_rho = std::numeric_limits<double>::infinity();
  double min_p = min_rho;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Vec4 w = conserved_to_primitive({q(0, i, j), q(1, i, j), q(2, i, j), q(3, i, j)});
      min_rho = std::min(min_rho, w[0]);
      min_p = std::min(min_p, w[3]);
    }
  }
  res.summary.min_density = min_rho;
  res.summary.min_pressure = min_p;
  res.summary.positive = min_rho > 0.0 && min_p > 0.0;
  if (prob.kind == ProblemKind::riemann2d_c4) {
    res.summary.symmetry_error = diagonal_symmetry_error(q);
    if (cfg.overshoot) res.summary.slice_overshoot = envelope_overshoot(density_slice(q, 0.5));
  }
  res.field2d = std::move(q);
}

}  // namespace detail

/// Runs one (scheme, N) pair and writes its artifacts under cfg.output:
/// `<stem>_solution.csv`, `<stem>_nonop.csv`, `<stem>_trace.csv` and
/// `<stem>_summary.json`.
inline RunResult run_single(const RunConfig& cfg, const MappingSpec& spec, int n) {
  const ProblemSpec prob = resolved_problem(cfg);
  validate(prob.stepping);
  RunResult res;
  RunSummary& s = res.summary;
  s.problem = cfg.problem;
  s.scheme = scheme_name(spec);
  s.descriptor = format_scheme_descriptor(spec);
  s.n = n;
  s.t_end = prob.t_end;
  s.eps = prob.eps;

  const auto start = std::chrono::steady_clock::now();
  dispatch_mapping(spec, [&](auto strategy) {
    if (prob.dimension == 1) {
      detail::run_advection(cfg, prob, strategy, n, res);
    } else {
      detail::run_euler(cfg, prob, strategy, n, res);
    }
  });
  s.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  const std::string stem = run_stem(cfg, spec, n);
  if (cfg.write_solution) {
    const fs::path p = dir / (stem + "_solution.csv");
    auto out = detail::open_output(p);
    if (res.field1d) {
      write_snapshot_csv(out, *res.field1d);
    } else {
      write_snapshot_csv(out, *res.field2d);
    }
    s.files.push_back(p.string());
  }
  if (cfg.nonop && prob.dimension == 1) {
    const fs::path p = dir / (stem + "_nonop.csv");
    auto out = detail::open_output(p);
    write_nonop_csv(out, res.nonop_records);
    s.files.push_back(p.string());
  }
  if (cfg.trace && prob.dimension == 1) {
    const fs::path p = dir / (stem + "_trace.csv");
    auto out = detail::open_output(p);
    write_trace_csv(out, res.trace_records);
    s.files.push_back(p.string());
  }
  const fs::path p = dir / (stem + "_summary.json");
  s.files.push_back(p.string());
  auto out = detail::open_output(p);
  out << to_json(s).dump(2) << '\n';
  return res;
}

// ---------------------------------------------------------------------------
// Sweeps

struct IncreasedErrorRow {
  std::string scheme;
  int n = 0;
  std::optional<double> l1, l2, linf;
};

struct SweepReport {
  std::vector<ErrorRow> rows;
  std::vector<IncreasedErrorRow> increased;
  std::vector<RunSummary> summaries;
};

inline void write_increased_csv(std::ostream& os, const std::vector<IncreasedErrorRow>& rows) {
  os << "scheme,N,L1pct,L2pct,Linfpct\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.n << ',' << opt(r.l1) << ',' << opt(r.l2) << ',' << opt(r.linf) << '\n';
  }
}

/// One run per (scheme, N), in config order, merged into an error table
/// `<problem>_errors.csv` and, with a reference scheme, the increased-error
/// table `<problem>_increased.csv`.
inline SweepReport run_sweep(const RunConfig& cfg) {
  if (cfg.schemes.empty()) throw ConfigError("sweep needs at least one scheme", "schemes");
  const ProblemSpec prob = resolved_problem(cfg);
  if (!prob.has_exact) throw ConfigError("problem '" + cfg.problem + "' has no exact solution to sweep", "problem");
  SweepReport rep;
  for (const auto& spec : cfg.schemes) {
    for (int n : prob.resolutions) {
      RunResult r = run_single(cfg, spec, n);
      rep.rows.push_back({r.summary.scheme, n, *r.summary.errors, {}, {}, {}});
      rep.summaries.push_back(std::move(r.summary));
    }
  }
  fill_orders(rep.rows);
  if (cfg.reference) {
    for (const auto& row : rep.rows) {
      const ErrorRow* ref = nullptr;
      for (const auto& c : rep.rows) {
        if (c.scheme == *cfg.reference && c.n == row.n) ref = &c;
      }
      if (ref == nullptr || row.scheme == *cfg.reference) continue;
      rep.increased.push_back({row.scheme, row.n, increased_error_pct(row.norms.l1, ref->norms.l1),
                               increased_error_pct(row.norms.l2, ref->norms.l2),
                               increased_error_pct(row.norms.linf, ref->norms.linf)});
    }
  }
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  fs::create_directories(dir);
  {
    auto out = detail::open_output(dir / (cfg.problem + "_errors.csv"));
    write_error_csv(out, rep.rows);
  }
  if (cfg.reference) {
    auto out = detail::open_output(dir / (cfg.problem + "_increased.csv"));
    write_increased_csv(out, rep.increased);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Plot data

enum class PlotKind { solution, mapping_curve, trace_scatter, nonop_overlay, slice_2d };

inline PlotKind parse_plot_kind(const std::string& s) {
  if (s == "solution") return PlotKind::solution;
  if (s == "mapping-curve") return PlotKind::mapping_curve;
  if (s == "trace-scatter") return PlotKind::trace_scatter;
  if (s == "nonop-overlay") return PlotKind::nonop_overlay;
  if (s == "slice-2d") return PlotKind::slice_2d;
  throw ConfigError("unknown plot kind '" + s + "'", "kind");
}

/// omega,g0,g1,g2 on a uniform omega grid.
inline void write_mapping_curve(std::ostream& os, const MappingSpec& spec, int samples = 1001) {
  if (samples < 2) throw ConfigError("need at least 2 samples", "samples");
  os << "omega,g0,g1,g2\n";
  for (int i = 0; i < samples; ++i) {
    const double w = static_cast<double>(i) / (samples - 1);
    os << format_double(w);
    for (int s = 0; s < 3; ++s) os << ',' << format_double(mapping_value(spec, w, s));
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::vector<std::string>> read_csv_rows(const std::string& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("missing input '" + path + "'", "input");
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw ConfigError("'" + path + "' does not start with header '" + header + "'", "input");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) rows.push_back(split_csv_line(trim(line)));
  }
  return rows;
}

}  // namespace detail

struct PlotRequest {
  PlotKind kind = PlotKind::solution;
  std::vector<std::string> inputs;  // files, a config path or a scheme descriptor
  double y = 0.5;                   // slice plane
  int samples = 1001;
};

/// Writes plot-ready CSV to `os`:
///  solution       inputs = {config}: runs it and writes x,u,exact
///  mapping-curve  inputs = {scheme descriptor}
///  trace-scatter  inputs = {trace csv}: s,omega,g
///  nonop-overlay  inputs = {solution csv, non-OP csv}: x,u at flagged cells
///  slice-2d       inputs = {2D solution csv}: x,rho along plane y
inline void emit_plotdata(const PlotRequest& req, std::ostream& os) {
  auto need = [&](std::size_t k) {
    if (req.inputs.size() != k) {
      throw ConfigError("plot kind needs " + std::to_string(k) + " input(s)", "input");
    }
  };
  switch (req.kind) {
    case PlotKind::mapping_curve: {
      need(1);
      write_mapping_curve(os, parse_scheme_descriptor(req.inputs[0]), req.samples);
      return;
    }
    case PlotKind::solution: {
      need(1);
      RunConfig cfg = load_config_file(req.inputs[0]);
      if (cfg.schemes.size() != 1) throw ConfigError("solution plot needs exactly one scheme", "scheme");
      const ProblemSpec prob = resolved_problem(cfg);
      if (prob.dimension != 1) throw ConfigError("solution plot is 1D only; use slice-2d", "problem");
      const int n = prob.resolutions.back();
      RunResult r = run_single(cfg, cfg.schemes.front(), n);
      const CellField1D exact = exact_advection(prob.profile, prob.t_end, r.field1d->grid());
      os << "x,u,exact\n";
      for (int j = 0; j < n; ++j) {
        os << format_double(exact.grid().center(j)) << ',' << format_double((*r.field1d)[j]) << ','
           << format_double(exact[j]) << '\n';
      }
      return;
    }
    case PlotKind::trace_scatter: {
      need(1);
      os << "s,omega,g\n";
      for (const auto& row : detail::read_csv_rows(req.inputs[0], "t,x,s,omega,g")) {
        if (row.size() != 5) throw ConfigError("malformed trace row", "input");
        os << row[2] << ',' << row[3] << ',' << row[4] << '\n';
      }
      return;
    }
    case PlotKind::nonop_overlay: {
      need(2);
      std::map<double, std::string> u_at;
      for (const auto& row : detail::read_csv_rows(req.inputs[0], "x,u")) {
        if (row.size() != 2) throw ConfigError("malformed solution row", "input");
        u_at[parse_double(row[0])] = row[1];
      }
      std::set<double> flagged;
      for (const auto& row : detail::read_csv_rows(req.inputs[1], "t,step,stage,x,bias,w0,w1,w2,g0,g1,g2,pair")) {
        if (row.size() != 12) throw ConfigError("malformed non-OP row", "input");
        flagged.insert(parse_double(row[3]));
      }
      os << "x,u\n";
      for (double x : flagged) {
        auto it = u_at.find(x);
        if (it == u_at.end()) throw ConfigError("non-OP location not on the solution grid", "input");
        os << format_double(x) << ',' << it->second << '\n';
      }
      return;
    }
    case PlotKind::slice_2d: {
      need(1);
      std::map<double, std::vector<std::pair<double, double>>> columns;  // x -> (y, rho)
      for (const auto& row : detail::read_csv_rows(req.inputs[0], "x,y,rho,u,v,p")) {
        if (row.size() != 6) throw ConfigError("malformed 2D solution row", "input");
        columns[parse_double(row[0])].emplace_back(parse_double(row[1]), parse_double(row[2]));
      }
      os << "x,rho\n";
      for (auto& [x, col] : columns) {
        std::sort(col.begin(), col.end());
        if (col.size() < 2) throw ConfigError("2D solution needs at least two rows", "input");
        std::size_t k = 0;
        while (k + 2 < col.size() && col[k + 1].first < req.y) ++k;
        const auto [y0, r0] = col[k];
        const auto [y1, r1] = col[k + 1];
        const double w = std::clamp((req.y - y0) / (y1 - y0), 0.0, 1.0);
        os << format_double(x) << ',' << format_double((1.0 - w) * r0 + w * r1) << '\n';
      }
      return;
    }
  }
}

}  // namespace weno
