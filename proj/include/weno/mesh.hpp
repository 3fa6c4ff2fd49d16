#pragma once

// Uniform 1D/2D structured grids, cell-averaged fields with ghost layers,
// boundary fills and initial cell averaging.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "weno/errors.hpp"

namespace weno {

/// Ghost width needed by the five-cell stencil plus the right-biased shift.
inline constexpr int kGhostWidth = 3;
/// Smallest grid that still holds one full stencil.
inline constexpr int kMinCells = 5;

enum class BoundaryKind { periodic, transmissive };

struct Grid1D {
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 0;
  int n_ghost = kGhostWidth;
  double dx = 0.0;

  /// Center of interior cell j (0-based; ghosts are negative or >= n_cells).
  double center(int j) const { return x_left + (j + 0.5) * dx; }
  /// Left face of cell j; face(n_cells) is the right domain edge.
  double face(int j) const { return x_left + j * dx; }
  double length() const { return x_right - x_left; }
  int padded() const { return n_cells + 2 * n_ghost; }

  bool operator==(const Grid1D&) const = default;
};

inline Grid1D build_grid_1d(double x_left, double x_right, int n_cells, int n_ghost = kGhostWidth) {
  if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right)) {
    throw ConfigError("grid extents must satisfy x_left < x_right", "domain");
  }
  if (n_cells < kMinCells) {
    throw ConfigError("grid needs at least 5 cells, got " + std::to_string(n_cells), "N");
  }
  if (n_ghost < kGhostWidth) {
    throw ConfigError("ghost width must be >= 3", "n_ghost");
  }
  return Grid1D{x_left, x_right, n_cells, n_ghost, (x_right - x_left) / n_cells};
}

/// Cell averages of m components, stored component-major with ghosts:
/// values[c * padded + (j + n_ghost)].
class CellField1D {
 public:
  CellField1D() = default;
  explicit CellField1D(const Grid1D& grid, int components = 1)
      : values(static_cast<std::size_t>(components) * grid.padded(), 0.0), grid_(grid), components_(components) {}

  const Grid1D& grid() const { return grid_; }
  int components() const { return components_; }

  double& operator()(int c, int j) { return values[index(c, j)]; }
  double operator()(int c, int j) const { return values[index(c, j)]; }
  double& operator[](int j) { return values[index(0, j)]; }
  double operator[](int j) const { return values[index(0, j)]; }

  /// Interior cells of component c.
  std::span<double> interior(int c = 0) {
    return {values.data() + index(c, 0), static_cast<std::size_t>(grid_.n_cells)};
  }
  std::span<const double> interior(int c = 0) const {
    return {values.data() + index(c, 0), static_cast<std::size_t>(grid_.n_cells)};
  }

  std::size_t index(int c, int j) const {
    return static_cast<std::size_t>(c) * grid_.padded() + static_cast<std::size_t>(j + grid_.n_ghost);
  }

  std::vector<double> values;

 private:
  Grid1D grid_{};
  int components_ = 0;
};

struct Grid2D {
  double x_left = 0.0, x_right = 1.0;
  double y_bottom = 0.0, y_top = 1.0;
  int nx = 0, ny = 0;
  int n_ghost = kGhostWidth;
  double dx = 0.0, dy = 0.0;

  double xc(int i) const { return x_left + (i + 0.5) * dx; }
  double yc(int j) const { return y_bottom + (j + 0.5) * dy; }
  int padded_x() const { return nx + 2 * n_ghost; }
  int padded_y() const { return ny + 2 * n_ghost; }

  bool operator==(const Grid2D&) const = default;
};

inline Grid2D build_grid_2d(double x_left, double x_right, int nx, double y_bottom, double y_top, int ny,
                            int n_ghost = kGhostWidth) {
  const Grid1D gx = build_grid_1d(x_left, x_right, nx, n_ghost);
  const Grid1D gy = build_grid_1d(y_bottom, y_top, ny, n_ghost);
  return Grid2D{x_left, x_right, y_bottom, y_top, nx, ny, n_ghost, gx.dx, gy.dx};
}

/// 2D cell averages, row-major over (component, y, x) with ghost layers in
/// both directions.
class CellField2D {
 public:
  CellField2D() = default;
  explicit CellField2D(const Grid2D& grid, int components = 4)
      : values(static_cast<std::size_t>(components) * grid.padded_x() * grid.padded_y(), 0.0),
        grid_(grid),
        components_(components) {}

  const Grid2D& grid() const { return grid_; }
  int components() const { return components_; }

  std::size_t index(int c, int i, int j) const {
    const auto px = static_cast<std::size_t>(grid_.padded_x());
    const auto py = static_cast<std::size_t>(grid_.padded_y());
    return (static_cast<std::size_t>(c) * py + static_cast<std::size_t>(j + grid_.n_ghost)) * px +
           static_cast<std::size_t>(i + grid_.n_ghost);
  }
  /// Distance between consecutive components of one cell.
  std::size_t component_stride() const {
    return static_cast<std::size_t>(grid_.padded_x()) * grid_.padded_y();
  }

  double& operator()(int c, int i, int j) { return values[index(c, i, j)]; }
  double operator()(int c, int i, int j) const { return values[index(c, i, j)]; }

  std::vector<double> values;

 private:
  Grid2D grid_{};
  int components_ = 0;
};

struct Boundaries1D {
  BoundaryKind left = BoundaryKind::periodic;
  BoundaryKind right = BoundaryKind::periodic;
};

struct Boundaries2D {
  BoundaryKind west = BoundaryKind::transmissive;
  BoundaryKind east = BoundaryKind::transmissive;
  BoundaryKind south = BoundaryKind::transmissive;
  BoundaryKind north = BoundaryKind::transmissive;
};

namespace detail {

// Index of the interior cell that supplies ghost g (g < 0 or g >= n).
inline int ghost_source(int g, int n, BoundaryKind low, BoundaryKind high) {
  if (g < 0) {
    return low == BoundaryKind::periodic ? ((g % n) + n) % n : 0;
  }
  return high == BoundaryKind::periodic ? g % n : n - 1;
}

}  // namespace detail

inline void fill_ghost(CellField1D& field, Boundaries1D bc) {
  const int n = field.grid().n_cells;
  const int ng = field.grid().n_ghost;
  for (int c = 0; c < field.components(); ++c) {
    for (int g = 1; g <= ng; ++g) {
      field(c, -g) = field(c, detail::ghost_source(-g, n, bc.left, bc.right));
      field(c, n - 1 + g) = field(c, detail::ghost_source(n - 1 + g, n, bc.left, bc.right));
    }
  }
}

/// Fills x ghosts of interior rows first, then y ghosts of every padded
/// column, so corners receive the diagonally mapped interior cell.
inline void fill_ghost(CellField2D& field, Boundaries2D bc) {
  const Grid2D& g = field.grid();
  const int ng = g.n_ghost;
  for (int c = 0; c < field.components(); ++c) {
    for (int j = 0; j < g.ny; ++j) {
      for (int k = 1; k <= ng; ++k) {
        field(c, -k, j) = field(c, detail::ghost_source(-k, g.nx, bc.west, bc.east), j);
        field(c, g.nx - 1 + k, j) = field(c, detail::ghost_source(g.nx - 1 + k, g.nx, bc.west, bc.east), j);
      }
    }
    for (int i = -ng; i < g.nx + ng; ++i) {
      for (int k = 1; k <= ng; ++k) {
        field(c, i, -k) = field(c, i, detail::ghost_source(-k, g.ny, bc.south, bc.north));
        field(c, i, g.ny - 1 + k) = field(c, i, detail::ghost_source(g.ny - 1 + k, g.ny, bc.south, bc.north));
      }
    }
  }
}

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n from the Chebyshev initial guess.
/// Rules are cached per order.
inline const GaussRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  if (order < 1) throw ConfigError("quadrature order must be positive", "quadrature_order");
  std::lock_guard lock(mutex);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(order, std::move(rule)).first->second;
}

/// Mean of f over [a, b]: sum(w_k f(x_k)) / sum(w_k), so constants are
/// reproduced exactly.
template <class F>
double interval_average(const F& f, double a, double b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  double wsum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    wsum += rule.weights[k];
  }
  return acc / wsum;
}

/// Mean of f over [a, b] after splitting at the given (sorted) breakpoints
/// that fall strictly inside. A single piece is sampled once at its
/// midpoint when `piecewise_constant` is set.
template <class F>
double split_average(const F& f, double a, double b, std::span<const double> breaks, int order,
                     bool piecewise_constant) {
  double lo = a;
  double acc = 0.0;
  bool split = false;
  // Breaks within rounding of a face are taken to lie on it.
  const double slack = 1e-12 * (b - a);
  auto piece = [&](double l, double r) {
    return piecewise_constant ? f(0.5 * (l + r)) : interval_average(f, l, r, order);
  };
  for (double bp : breaks) {
    if (bp <= lo + slack || bp >= b - slack) continue;
    acc += (bp - lo) * piece(lo, bp);
    lo = bp;
    split = true;
  }
  if (!split) return piece(a, b);
  acc += (b - lo) * piece(lo, b);
  return acc / (b - a);
}

/// Cell averages of a pointwise function using composite Gauss–Legendre
/// quadrature of the given order in every cell.
template <class F>
CellField1D cell_average_ic(const Grid1D& grid, const F& f, int quadrature_order) {
  CellField1D field(grid, 1);
  for (int j = 0; j < grid.n_cells; ++j) {
    const double v = interval_average(f, grid.face(j), grid.face(j + 1), quadrature_order);
    if (!std::isfinite(v)) {
      throw DataError("non-finite initial value in cell " + std::to_string(j));
    }
    field[j] = v;
  }
  return field;
}

/// Writes `x,u` rows (cell centers against component-0 averages).
inline void write_snapshot_csv(std::ostream& os, const CellField1D& field) {
  os << "x,u\n";
  char buf[64];
  for (int j = 0; j < field.grid().n_cells; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", field.grid().center(j), field[j]);
    os << buf;
  }
}

/// True when every interior value is finite.
inline bool interior_finite(const CellField1D& field) {
  for (int c = 0; c < field.components(); ++c) {
    for (double v : field.interior(c)) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

inline bool interior_finite(const CellField2D& field) {
  const Grid2D& g = field.grid();
  for (int c = 0; c < field.components(); ++c) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!std::isfinite(field(c, i, j))) return false;
      }
    }
  }
  return true;
}

}  // namespace weno
