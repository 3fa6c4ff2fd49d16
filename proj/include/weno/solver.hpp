#pragma once

// Global Lax–Friedrichs fluxes, SSP-RK3 time stepping, the 1D linear
// advection operator and the 2D Euler operator with characteristic
// projection.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <type_traits>
#include <vector>

#include "weno/errors.hpp"
#include "weno/kernel.hpp"
#include "weno/mapping.hpp"
#include "weno/mesh.hpp"

namespace weno {

struct GasConstants {
  double gamma = 1.4;
};

/// 1/2 [f(a) + f(b) - alpha (b - a)].
template <class F>
double lax_friedrichs(double a, double b, const F& f, double alpha) {
  return 0.5 * (f(a) + f(b) - alpha * (b - a));
}

enum class DtMode { fixed_cfl, accuracy_cfl };

struct TimeStepping {
  double cfl = 0.1;
  double t_end = 0.0;
  DtMode mode = DtMode::fixed_cfl;
};

inline void validate(const TimeStepping& ts) {
  if (!(ts.cfl > 0.0) || !std::isfinite(ts.cfl)) throw ConfigError("cfl must be positive", "cfl");
  if (!(ts.t_end >= 0.0) || !std::isfinite(ts.t_end)) throw ConfigError("t_end must be >= 0", "t_end");
}

/// Unclipped 1D step. In accuracy mode the Courant number is dx^(2/3).
inline double compute_dt(double dx, double alpha, const TimeStepping& ts) {
  const double cfl = ts.mode == DtMode::accuracy_cfl ? std::pow(dx, 2.0 / 3.0) : ts.cfl;
  return cfl * dx / alpha;
}

/// Unclipped 2D step cfl / (alpha_x/dx + alpha_y/dy).
inline double compute_dt(double dx, double dy, double alpha_x, double alpha_y, const TimeStepping& ts) {
  return ts.cfl / (alpha_x / dx + alpha_y / dy);
}

/// Shortens dt so that t + dt lands exactly on t_end.
inline double clip_dt(double dt, double t, double t_end) { return t + dt >= t_end ? t_end - t : dt; }

// ---------------------------------------------------------------------------
// SSP-RK3

/// Reusable stage storage; State needs a copyable `values` vector.
template <class State>
struct RkWorkspace {
  State u1, u2, l;
};

struct StageContext {
  std::int64_t step = 0;
  int stage = 0;
  double t = 0.0;  // time at which the stage operator is evaluated
  double dt = 0.0;
  bool final_step = false;
};

/// Shu–Osher SSP-RK3. `rhs(state, out, stage)` fills ghosts of `state` and
/// writes L(state) into `out`.
template <class State, class Rhs>
void ssp_rk3_step(State& u, Rhs&& rhs, double dt, RkWorkspace<State>& ws, StageContext ctx = {}) {
  if (ws.u1.values.size() != u.values.size()) ws = {u, u, u};
  auto& a = u.values;
  auto& b = ws.u1.values;
  auto& c = ws.u2.values;
  auto& l = ws.l.values;
  const std::size_t n = a.size();
  const double t0 = ctx.t;

  ctx.stage = 0;
  rhs(u, ws.l, ctx);
  for (std::size_t i = 0; i < n; ++i) b[i] = a[i] + dt * l[i];

  ctx.stage = 1;
  ctx.t = t0 + dt;
  rhs(ws.u1, ws.l, ctx);
  for (std::size_t i = 0; i < n; ++i) c[i] = 0.75 * a[i] + 0.25 * (b[i] + dt * l[i]);

  ctx.stage = 2;
  ctx.t = t0 + 0.5 * dt;
  rhs(ws.u2, ws.l, ctx);
  for (std::size_t i = 0; i < n; ++i) a[i] = a[i] / 3.0 + (2.0 / 3.0) * (c[i] + dt * l[i]);
}

template <class State, class Rhs>
void ssp_rk3_step(State& u, Rhs&& rhs, double dt) {
  RkWorkspace<State> ws{u, u, u};
  ssp_rk3_step(u, rhs, dt, ws);
}

// ---------------------------------------------------------------------------
// 1D scalar advection u_t + u_x = 0

struct NullObserver {
  static constexpr bool active = false;
  void operator()(int, const BiasedPair&, const StageContext&) {}
};

inline double max_wave_speed_advection() { return 1.0; }

/// -(1/dx)(h_{j+1/2} - h_{j-1/2}) for every interior cell. Ghosts of `u`
/// must be filled. The observer, when active, receives the reconstructions
/// centered on every interior cell: `minus` at x_{j+1/2}, `plus` at x_{j-1/2}.
template <class Mapping, class Observer = NullObserver>
void advection_rhs_1d(const CellField1D& u, CellField1D& out, const Mapping& map, double alpha, Epsilon eps = {},
                      Observer* observer = nullptr, const StageContext& ctx = {}) {
  const int n = u.grid().n_cells;
  const double inv_dx = 1.0 / u.grid().dx;
  const double* v = u.values.data() + u.index(0, 0);
  double* r = out.values.data() + out.index(0, 0);
  auto flux = [](double w) { return w; };

  double prev_minus = 0.0;
  double prev_flux = 0.0;
  for (int c = -1; c <= n; ++c) {
    const StencilWindow w{{v[c - 2], v[c - 1], v[c], v[c + 1], v[c + 2]}};
    const BiasedPair pair = reconstruct_both(w, map, eps);
    if constexpr (Observer::active) {
      if (observer != nullptr && c >= 0 && c < n) (*observer)(c, pair, ctx);
    }
    if (c >= 0) {
      // face c sits between cells c-1 and c
      const double h = lax_friedrichs(prev_minus, pair.plus.value, flux, alpha);
      if (c >= 1) r[c - 1] = -(h - prev_flux) * inv_dx;
      prev_flux = h;
    }
    prev_minus = pair.minus.value;
  }
}

// ---------------------------------------------------------------------------
// 2D Euler equations

/// Primitive state (rho, u, v, p).
using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

inline Vec4 primitive_to_conserved(const Vec4& w, double gamma = 1.4) {
  const double rho = w[0];
  return {rho, rho * w[1], rho * w[2], w[3] / (gamma - 1.0) + 0.5 * rho * (w[1] * w[1] + w[2] * w[2])};
}

inline Vec4 conserved_to_primitive(const Vec4& q, double gamma = 1.4) {
  const double rho = q[0];
  const double u = q[1] / rho;
  const double v = q[2] / rho;
  return {rho, u, v, (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v))};
}

inline Vec4 euler_flux_x(const Vec4& q, double gamma = 1.4) {
  const double u = q[1] / q[0];
  const double p = (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]);
  return {q[1], q[1] * u + p, q[2] * u, (q[3] + p) * u};
}

inline Vec4 swap_xy(const Vec4& q) { return {q[0], q[2], q[1], q[3]}; }

enum class Direction { x, y };
enum class InterfaceAverage { arithmetic, roe };

struct EulerEigenSystem {
  Mat4 left{};   // rows are left eigenvectors
  Mat4 right{};  // right[i][k]: component i of eigenvector k
  Vec4 lambda{};
  Direction direction = Direction::x;
};

namespace detail {

inline void require_physical(double rho, double p, const char* where) {
  if (!(rho > 0.0) || !(p > 0.0) || !std::isfinite(rho) || !std::isfinite(p)) {
    throw StateError(std::string("non-physical state in ") + where);
  }
}

// x-direction eigensystem at (u, v, H, c).
inline EulerEigenSystem eigensystem_x(double u, double v, double H, double c, double gamma) {
  EulerEigenSystem e;
  const double q2 = u * u + v * v;
  const double b1 = (gamma - 1.0) / (c * c);
  const double b2 = 0.5 * q2 * b1;
  e.right = {{{1.0, 1.0, 0.0, 1.0},
              {u - c, u, 0.0, u + c},
              {v, v, 1.0, v},
              {H - u * c, 0.5 * q2, v, H + u * c}}};
  e.left = {{{0.5 * (b2 + u / c), 0.5 * (-b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1},
             {1.0 - b2, b1 * u, b1 * v, -b1},
             {-v, 0.0, 1.0, 0.0},
             {0.5 * (b2 - u / c), 0.5 * (-b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1}}};
  e.lambda = {u - c, u, u, u + c};
  return e;
}

// Averaged (u, v, H, c) between two conserved states, x-oriented.
inline std::array<double, 4> interface_state(const Vec4& ql, const Vec4& qr, double gamma, InterfaceAverage avg) {
  const Vec4 wl = conserved_to_primitive(ql, gamma);
  const Vec4 wr = conserved_to_primitive(qr, gamma);
  if (avg == InterfaceAverage::roe) {
    require_physical(wl[0], wl[3], "Roe average");
    require_physical(wr[0], wr[3], "Roe average");
    const double sl = std::sqrt(wl[0]);
    const double sr = std::sqrt(wr[0]);
    const double hl = (ql[3] + wl[3]) / wl[0];
    const double hr = (qr[3] + wr[3]) / wr[0];
    const double u = (sl * wl[1] + sr * wr[1]) / (sl + sr);
    const double v = (sl * wl[2] + sr * wr[2]) / (sl + sr);
    const double H = (sl * hl + sr * hr) / (sl + sr);
    const double c2 = (gamma - 1.0) * (H - 0.5 * (u * u + v * v));
    if (!(c2 > 0.0)) throw StateError("non-physical Roe average");
    return {u, v, H, std::sqrt(c2)};
  }
  const double rho = 0.5 * (wl[0] + wr[0]);
  const double u = 0.5 * (wl[1] + wr[1]);
  const double v = 0.5 * (wl[2] + wr[2]);
  const double p = 0.5 * (wl[3] + wr[3]);
  require_physical(rho, p, "interface average");
  const double c2 = gamma * p / rho;
  return {u, v, c2 / (gamma - 1.0) + 0.5 * (u * u + v * v), std::sqrt(c2)};
}

}  // namespace detail

/// Eigensystem of the flux Jacobian in `direction` at the averaged state of
/// two conserved vectors. The y system is the x system with the two
/// momentum components exchanged.
inline EulerEigenSystem euler_eigensystem(const Vec4& q_left, const Vec4& q_right, Direction direction,
                                          double gamma = 1.4,
                                          InterfaceAverage avg = InterfaceAverage::arithmetic) {
  if (direction == Direction::x) {
    const auto [u, v, H, c] = detail::interface_state(q_left, q_right, gamma, avg);
    return detail::eigensystem_x(u, v, H, c, gamma);
  }
  const auto [u, v, H, c] = detail::interface_state(swap_xy(q_left), swap_xy(q_right), gamma, avg);
  EulerEigenSystem e = detail::eigensystem_x(u, v, H, c, gamma);
  EulerEigenSystem out = e;
  out.direction = Direction::y;
  // R_y = P R_x, L_y = L_x P with P exchanging components 1 and 2.
  for (int k = 0; k < 4; ++k) {
    std::swap(out.right[1][k], out.right[2][k]);
    std::swap(out.left[k][1], out.left[k][2]);
  }
  return out;
}

inline Vec4 mat_vec(const Mat4& m, const Vec4& x) {
  Vec4 y{};
  for (int i = 0; i < 4; ++i) y[i] = ((m[i][0] * x[0] + m[i][1] * x[1]) + m[i][2] * x[2]) + m[i][3] * x[3];
  return y;
}

struct WaveSpeeds {
  double x = 0.0;
  double y = 0.0;
};

/// max(|u| + c) and max(|v| + c) over interior cells.
inline WaveSpeeds max_wave_speed(const CellField2D& q, double gamma = 1.4) {
  const Grid2D& g = q.grid();
  WaveSpeeds s;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec4 w = conserved_to_primitive({q(0, i, j), q(1, i, j), q(2, i, j), q(3, i, j)}, gamma);
      detail::require_physical(w[0], w[3], "wave speed evaluation");
      const double c = std::sqrt(gamma * w[3] / w[0]);
      s.x = std::max(s.x, std::abs(w[1]) + c);
      s.y = std::max(s.y, std::abs(w[2]) + c);
    }
  }
  return s;
}

/// Per-line scratch for the 2D operator.
struct EulerScratch {
  std::vector<Vec4> line;
  std::vector<Vec4> flux;
};

namespace detail {

// Fluxes at the n + 1 faces of one x-oriented line of conserved states.
// line[k] holds cell k - n_ghost; flux[f] is the flux through the left face
// of cell f.
template <class Mapping>
void euler_line_fluxes(const std::vector<Vec4>& line, std::vector<Vec4>& flux, int n, int ng, const Mapping& map,
                       double alpha, double gamma, InterfaceAverage avg, Epsilon eps) {
  flux.resize(n + 1);
  for (int f = 0; f <= n; ++f) {
    const int base = f + ng;  // index of cell f in `line`
    const EulerEigenSystem e = euler_eigensystem(line[base - 1], line[base], Direction::x, gamma, avg);
    std::array<Vec4, 6> w;
    for (int k = 0; k < 6; ++k) w[k] = mat_vec(e.left, line[base - 3 + k]);
    Vec4 cm{}, cp{};
    for (int m = 0; m < 4; ++m) {
      const StencilWindow left{{w[0][m], w[1][m], w[2][m], w[3][m], w[4][m]}};
      const StencilWindow right{{w[5][m], w[4][m], w[3][m], w[2][m], w[1][m]}};
      cm[m] = reconstruct_left(left, map, eps);
      cp[m] = reconstruct_left(right, map, eps);
    }
    const Vec4 qm = mat_vec(e.right, cm);
    const Vec4 qp = mat_vec(e.right, cp);
    const Vec4 fm = euler_flux_x(qm, gamma);
    const Vec4 fp = euler_flux_x(qp, gamma);
    for (int m = 0; m < 4; ++m) flux[f][m] = 0.5 * (fm[m] + fp[m] - alpha * (qp[m] - qm[m]));
  }
}

}  // namespace detail

/// RHS of the 2D Euler equations in conserved variables. Ghosts must be
/// filled. The y sweep reuses the x sweep on momentum-swapped states so
/// that the discretization commutes with the diagonal reflection.
template <class Mapping>
void euler_rhs_2d(const CellField2D& q, CellField2D& out, const Mapping& map, WaveSpeeds alpha,
                  double gamma = 1.4, InterfaceAverage avg = InterfaceAverage::arithmetic, Epsilon eps = {},
                  EulerScratch* scratch = nullptr) {
  const Grid2D& g = q.grid();
  const int ng = g.n_ghost;
  EulerScratch local;
  EulerScratch& s = scratch != nullptr ? *scratch : local;

  s.line.resize(g.padded_x());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = -ng; i < g.nx + ng; ++i) s.line[i + ng] = {q(0, i, j), q(1, i, j), q(2, i, j), q(3, i, j)};
    detail::euler_line_fluxes(s.line, s.flux, g.nx, ng, map, alpha.x, gamma, avg, eps);
    for (int i = 0; i < g.nx; ++i) {
      for (int m = 0; m < 4; ++m) out(m, i, j) = -(s.flux[i + 1][m] - s.flux[i][m]) / g.dx;
    }
  }

  s.line.resize(g.padded_y());
  for (int i = 0; i < g.nx; ++i) {
    for (int j = -ng; j < g.ny + ng; ++j) {
      s.line[j + ng] = {q(0, i, j), q(2, i, j), q(1, i, j), q(3, i, j)};
    }
    detail::euler_line_fluxes(s.line, s.flux, g.ny, ng, map, alpha.y, gamma, avg, eps);
    for (int j = 0; j < g.ny; ++j) {
      const Vec4 d = swap_xy({s.flux[j + 1][0] - s.flux[j][0], s.flux[j + 1][1] - s.flux[j][1],
                              s.flux[j + 1][2] - s.flux[j][2], s.flux[j + 1][3] - s.flux[j][3]});
      for (int m = 0; m < 4; ++m) out(m, i, j) += -d[m] / g.dy;
    }
  }
}

/// True when every interior cell has rho > 0 and p > 0.
inline bool positivity_holds(const CellField2D& q, double gamma = 1.4) {
  const Grid2D& g = q.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec4 w = conserved_to_primitive({q(0, i, j), q(1, i, j), q(2, i, j), q(3, i, j)}, gamma);
      if (!(w[0] > 0.0) || !(w[3] > 0.0)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Run loop

struct StepInfo {
  double dt = 0.0;
  double alpha = 0.0;  // largest wave speed, for logging
};

struct RunOptions {
  /// Print `step,t,dt,alpha` to stderr every this many steps; 0 disables.
  std::int64_t progress_every = 0;
  /// Hard cap on the number of steps; 0 means unlimited.
  std::int64_t max_steps = 0;
};

struct RunStats {
  std::int64_t steps = 0;
  double t = 0.0;
};

/// Advances `u` from t = 0 to exactly t_end. A System provides
///   StepInfo begin_step(State&)       fill ghosts, freeze alpha, unclipped dt
///   void rhs(State&, State&, const StageContext&)
///   bool finite(const State&)
template <class State, class System>
RunStats advance_to(State& u, double t_end, System& system, const RunOptions& opts = {}) {
  RunStats stats;
  if (t_end <= 0.0) return stats;
  RkWorkspace<State> ws{u, u, u};
  double t = 0.0;
  auto rhs = [&](State& state, State& out, const StageContext& ctx) { system.rhs(state, out, ctx); };
  while (t < t_end) {
    StepInfo info = system.begin_step(u);
    if (!(info.dt > 0.0) || !std::isfinite(info.dt)) throw StateError("invalid time step", stats.steps);
    const bool final_step = t + info.dt >= t_end;
    const double dt = clip_dt(info.dt, t, t_end);
    StageContext ctx{stats.steps, 0, t, dt, final_step};
    ssp_rk3_step(u, rhs, dt, ws, ctx);
    t = final_step ? t_end : t + dt;
    ++stats.steps;
    if (!system.finite(u)) throw StateError("non-finite solution", stats.steps);
    if (opts.progress_every > 0 && stats.steps % opts.progress_every == 0) {
      std::fprintf(stderr, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(stats.steps), t, dt, info.alpha);
    }
    if (opts.max_steps > 0 && stats.steps >= opts.max_steps) break;
  }
  stats.t = t;
  return stats;
}

/// Periodic or transmissive scalar advection with a compile-time mapping.
template <class Mapping, class Observer = NullObserver>
struct AdvectionSystem {
  Mapping map;
  TimeStepping ts;
  Boundaries1D bc{};
  Epsilon eps{};
  Observer* observer = nullptr;

  StepInfo begin_step(CellField1D& u) {
    fill_ghost(u, bc);
    const double alpha = max_wave_speed_advection();
    return {compute_dt(u.grid().dx, alpha, ts), alpha};
  }
  void rhs(CellField1D& u, CellField1D& out, const StageContext& ctx) {
    fill_ghost(u, bc);
    advection_rhs_1d(u, out, map, max_wave_speed_advection(), eps, observer, ctx);
  }
  bool finite(const CellField1D& u) const { return interior_finite(u); }
};

template <class Mapping>
struct EulerSystem {
  Mapping map;
  TimeStepping ts;
  Boundaries2D bc{};
  GasConstants gas{};
  InterfaceAverage avg = InterfaceAverage::arithmetic;
  Epsilon eps{};
  WaveSpeeds alpha{};
  EulerScratch scratch{};

  StepInfo begin_step(CellField2D& q) {
    fill_ghost(q, bc);
    alpha = max_wave_speed(q, gas.gamma);
    const Grid2D& g = q.grid();
    return {compute_dt(g.dx, g.dy, alpha.x, alpha.y, ts), std::max(alpha.x, alpha.y)};
  }
  void rhs(CellField2D& q, CellField2D& out, const StageContext&) {
    fill_ghost(q, bc);
    euler_rhs_2d(q, out, map, alpha, gas.gamma, avg, eps, &scratch);
  }
  bool finite(const CellField2D& q) const { return interior_finite(q); }
};

}  // namespace weno
