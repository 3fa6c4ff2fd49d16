#pragma once

// Error norms, convergence orders, non-OP scanning, mapping traces, the
// isolated-discontinuity probe and overshoot measures, plus their CSV codecs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "weno/errors.hpp"
#include "weno/kernel.hpp"
#include "weno/mapping.hpp"
#include "weno/mesh.hpp"
#include "weno/solver.hpp"

namespace weno {

// ---------------------------------------------------------------------------
// CSV number codec

/// Shortest text that round-trips: 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& text, const std::string& key = {}) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ConfigError("not a number: '" + text + "'", key);
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// ---------------------------------------------------------------------------
// Errors

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

inline ErrorNorms error_norms(const CellField1D& numeric, const CellField1D& exact) {
  if (!(numeric.grid() == exact.grid())) throw ConfigError("error norms need identical grids", "N");
  const double h = numeric.grid().dx;
  double s1 = 0.0, s2 = 0.0, smax = 0.0;
  for (int j = 0; j < numeric.grid().n_cells; ++j) {
    const double e = std::abs(exact[j] - numeric[j]);
    s1 += e;
    s2 += e * e;
    smax = std::max(smax, e);
  }
  return {h * s1, std::sqrt(h * s2), smax};
}

/// log2(e_N / e_2N) between consecutive entries; absent when either is zero.
inline std::vector<std::optional<double>> convergence_orders(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] > 0.0 && errors[i] > 0.0) {
      out.emplace_back(std::log2(errors[i - 1] / errors[i]));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

/// (err_x - err_ref) / err_ref * 100; absent for err_ref == 0.
inline std::optional<double> increased_error_pct(double err_x, double err_ref) {
  if (!(err_ref > 0.0)) return std::nullopt;
  return (err_x - err_ref) / err_ref * 100.0;
}

/// Exceedance of the bounds [lower, upper].
struct Overshoot {
  double over = 0.0;
  double under = 0.0;
  double max() const { return std::max(over, under); }
};

inline Overshoot overshoot_metric(const CellField1D& field, double lower, double upper) {
  Overshoot o;
  for (double v : field.interior()) {
    o.over = std::max(o.over, v - upper);
    o.under = std::max(o.under, lower - v);
  }
  return o;
}

/// Largest excursion of a profile above or below the local envelope
/// [min(f_{i-h}, f_{i+h}), max(f_{i-h}, f_{i+h})] of its neighbours h cells
/// away. Monotone profiles give zero.
inline double envelope_overshoot(const std::vector<double>& f, int half_width = 2) {
  double worst = 0.0;
  for (int i = half_width; i + half_width < static_cast<int>(f.size()); ++i) {
    const double lo = std::min(f[i - half_width], f[i + half_width]);
    const double hi = std::max(f[i - half_width], f[i + half_width]);
    worst = std::max({worst, f[i] - hi, lo - f[i]});
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Non-OP scanning

struct NonOpRecord {
  double t = 0.0;
  std::int64_t step = 0;
  int stage = 0;
  double x = 0.0;
  /// -1: left-biased value at x_{j+1/2}; +1: right-biased value at x_{j-1/2}.
  int bias = -1;
  std::array<double, 3> w{};
  std::array<double, 3> g{};
  int m = -1;
  int n = -1;
};

/// Which flagged reconstructions are kept as records. Counts always cover
/// every stage of every step.
///   every_stage             every flagged stage of the run
///   final_step_first_stage  the first stage of the last step
///   end_state               one pass over the state reached at t_end
enum class ScanSchedule { every_stage, final_step_first_stage, end_state };

/// Run observer testing every reconstruction for non-OP mapping.
class NonOpScanner {
 public:
  static constexpr bool active = true;

  explicit NonOpScanner(const Grid1D& grid, ScanSchedule schedule = ScanSchedule::final_step_first_stage)
      : grid_(grid), schedule_(schedule) {}

  void operator()(int cell, const BiasedPair& pair, const StageContext& ctx) {
    check(cell, -1, pair.minus, ctx);
    check(cell, +1, pair.plus, ctx);
  }

  std::int64_t total_count() const { return total_; }
  std::int64_t fallback_count() const { return fallbacks_; }
  /// Distinct cell centers flagged at least once over the run.
  std::size_t unique_locations() const { return cells_.size(); }
  const std::vector<NonOpRecord>& records() const { return records_; }
  ScanSchedule schedule() const { return schedule_; }

  /// Appends records for the end state `u` (ghosts filled) without touching
  /// the run counts. Does nothing unless the schedule is end_state.
  template <class Mapping>
  void scan_end_state(const CellField1D& u, const Mapping& map, Epsilon eps, double t, std::int64_t steps) {
    if (schedule_ != ScanSchedule::end_state) return;
    NonOpScanner pass(grid_, ScanSchedule::every_stage);
    CellField1D scratch(u.grid(), 1);
    advection_rhs_1d(u, scratch, map, max_wave_speed_advection(), eps, &pass, StageContext{steps, 0, t, 0.0, true});
    records_.insert(records_.end(), pass.records_.begin(), pass.records_.end());
  }

 private:
  void check(int cell, int bias, const Reconstruction& r, const StageContext& ctx) {
    if (r.fallback) ++fallbacks_;
    const NonOpVerdict v = is_nonop_instance(r.omega_js, r.alpha);
    if (!v.nonop) return;
    ++total_;
    cells_.insert(cell);
    const bool keep = schedule_ == ScanSchedule::every_stage ||
                      (schedule_ == ScanSchedule::final_step_first_stage && ctx.final_step && ctx.stage == 0);
    if (keep) {
      records_.push_back({ctx.t, ctx.step, ctx.stage, grid_.center(cell), bias, r.omega_js.w, r.alpha, v.m, v.n});
    }
  }

  Grid1D grid_;
  ScanSchedule schedule_;
  std::int64_t total_ = 0;
  std::int64_t fallbacks_ = 0;
  std::set<int> cells_;
  std::vector<NonOpRecord> records_;
};

inline void write_nonop_csv(std::ostream& os, const std::vector<NonOpRecord>& records) {
  os << "t,step,stage,x,bias,w0,w1,w2,g0,g1,g2,pair\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << r.step << ',' << r.stage << ',' << format_double(r.x) << ',' << r.bias;
    for (double v : r.w) os << ',' << format_double(v);
    for (double v : r.g) os << ',' << format_double(v);
    os << ',' << r.m << r.n << '\n';
  }
}

inline NonOpRecord parse_nonop_row(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 12 || f[11].size() != 2) throw ConfigError("malformed non-OP row: " + line);
  NonOpRecord r;
  r.t = parse_double(f[0]);
  r.step = std::stoll(f[1]);
  r.stage = std::stoi(f[2]);
  r.x = parse_double(f[3]);
  r.bias = std::stoi(f[4]);
  for (int s = 0; s < 3; ++s) {
    r.w[s] = parse_double(f[5 + s]);
    r.g[s] = parse_double(f[8 + s]);
  }
  r.m = f[11][0] - '0';
  r.n = f[11][1] - '0';
  return r;
}

// ---------------------------------------------------------------------------
// Mapping traces

struct TraceRecord {
  double t = 0.0;
  double x = 0.0;
  int s = 0;
  double omega = 0.0;
  double g = 0.0;
};

/// Samples (omega_s^JS, g_s(omega_s^JS)) of the left-biased reconstruction
/// at each interior cell during the first stage of selected steps.
class TraceRecorder {
 public:
  static constexpr bool active = true;

  /// every: record every this many steps (and always the final step).
  TraceRecorder(const Grid1D& grid, std::int64_t every = 0) : grid_(grid), every_(every) {}

  void operator()(int cell, const BiasedPair& pair, const StageContext& ctx) {
    if (ctx.stage != 0) return;
    const bool due = ctx.final_step || (every_ > 0 && ctx.step % every_ == 0);
    if (!due) return;
    const double x = grid_.center(cell);
    for (int s = 0; s < 3; ++s) records_.push_back({ctx.t, x, s, pair.minus.omega_js[s], pair.minus.alpha[s]});
  }

  const std::vector<TraceRecord>& records() const { return records_; }

 private:
  Grid1D grid_;
  std::int64_t every_;
  std::vector<TraceRecord> records_;
};

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& records) {
  os << "t,x,s,omega,g\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << format_double(r.x) << ',' << r.s << ',' << format_double(r.omega) << ','
       << format_double(r.g) << '\n';
  }
}

inline TraceRecord parse_trace_row(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 5) throw ConfigError("malformed trace row: " + line);
  return {parse_double(f[0]), parse_double(f[1]), std::stoi(f[2]), parse_double(f[3]), parse_double(f[4])};
}

/// Fans one reconstruction stream out to two observers.
template <class A, class B>
struct ObserverPair {
  static constexpr bool active = A::active || B::active;
  A* a = nullptr;
  B* b = nullptr;
  void operator()(int cell, const BiasedPair& pair, const StageContext& ctx) {
    if constexpr (A::active) {
      if (a != nullptr) (*a)(cell, pair, ctx);
    }
    if constexpr (B::active) {
      if (b != nullptr) (*b)(cell, pair, ctx);
    }
  }
};

// ---------------------------------------------------------------------------
// Isolated-discontinuity probe

struct ProbeCase {
  std::string label;
  WeightTriple omega;
};

struct ProbeResult {
  std::string label;
  WeightTriple omega;
  double u = 0.0;
  double err = 0.0;
  double pct = 0.0;
};

/// Candidate values of a stencil whose third substencil crosses the
/// discontinuity; the exact interface value is 1.
inline constexpr SubstencilValues kProbeSubstencilValues{1.0, 1.0, -1.0};

inline std::vector<ProbeResult> discontinuity_probe(const std::vector<ProbeCase>& cases) {
  std::vector<ProbeResult> out;
  for (const auto& c : cases) {
    const double u = convex_combine(c.omega, kProbeSubstencilValues);
    const double err = std::abs(u - 1.0);
    out.push_back({c.label, c.omega, u, err, err * 100.0});
  }
  return out;
}

/// Weight triples taken from highlighted SLP points: the JS weights, their
/// non-OP images and the OP images of the same points.
inline std::vector<ProbeCase> reference_probe_cases() {
  return {
      {"C1-js", {{0.37291, 0.53663, 0.09046}}},   {"C1-nonop", {{0.10939, 0.64825, 0.24236}}},
      {"C1-op", {{0.24236, 0.64825, 0.10939}}},   {"A2-js", {{0.57568, 0.38416, 0.04016}}},
      {"A2-nonop", {{0.14069, 0.59737, 0.26194}}}, {"A2-op", {{0.59737, 0.26194, 0.14069}}},
      {"C3-js", {{0.54547, 0.39684, 0.05769}}},   {"C3-nonop", {{0.1, 0.6, 0.3}}},
      {"C3-op", {{0.6, 0.3, 0.1}}},
  };
}

inline void write_probe_csv(std::ostream& os, const std::vector<ProbeResult>& rows) {
  os << "label,w0,w1,w2,u,err,pct\n";
  for (const auto& r : rows) {
    os << r.label;
    for (double v : r.omega.w) os << ',' << format_double(v);
    os << ',' << format_double(r.u) << ',' << format_double(r.err) << ',' << format_double(r.pct) << '\n';
  }
}

inline ProbeResult parse_probe_row(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 7) throw ConfigError("malformed probe row: " + line);
  ProbeResult r;
  r.label = f[0];
  for (int s = 0; s < 3; ++s) r.omega.w[s] = parse_double(f[1 + s]);
  r.u = parse_double(f[4]);
  r.err = parse_double(f[5]);
  r.pct = parse_double(f[6]);
  return r;
}

// ---------------------------------------------------------------------------
// Error tables

struct ErrorRow {
  std::string scheme;
  int n = 0;
  ErrorNorms norms;
  std::optional<double> order1, order2, orderinf;
};

/// Fills the order columns of consecutive rows of the same scheme whose
/// resolutions double.
inline void fill_orders(std::vector<ErrorRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const ErrorRow& a = rows[i - 1];
    ErrorRow& b = rows[i];
    if (a.scheme != b.scheme || b.n != 2 * a.n) continue;
    auto order = [](double ea, double eb) -> std::optional<double> {
      return convergence_orders({ea, eb}).front();
    };
    b.order1 = order(a.norms.l1, b.norms.l1);
    b.order2 = order(a.norms.l2, b.norms.l2);
    b.orderinf = order(a.norms.linf, b.norms.linf);
  }
}

inline void write_error_csv(std::ostream& os, const std::vector<ErrorRow>& rows) {
  os << "scheme,N,L1,L2,Linf,order1,order2,orderinf\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.n << ',' << format_double(r.norms.l1) << ',' << format_double(r.norms.l2) << ','
       << format_double(r.norms.linf) << ',' << opt(r.order1) << ',' << opt(r.order2) << ',' << opt(r.orderinf)
       << '\n';
  }
}

inline ErrorRow parse_error_row(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 8) throw ConfigError("malformed error row: " + line);
  auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
  };
  return {f[0], std::stoi(f[1]), {parse_double(f[2]), parse_double(f[3]), parse_double(f[4])},
          opt(f[5]), opt(f[6]), opt(f[7])};
}

}  // namespace weno
