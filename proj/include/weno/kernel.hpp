#pragma once

// Fifth-order WENO-JS building blocks on a five-cell stencil
// (u_{j-2}, u_{j-1}, u_j, u_{j+1}, u_{j+2}) reconstructing at x_{j+1/2}.

#include <array>
#include <cmath>

#include "weno/errors.hpp"

#if defined(__GNUC__)
#define WENO_HOT_INLINE [[gnu::always_inline]] inline
#else
#define WENO_HOT_INLINE inline
#endif

namespace weno {

struct StencilWindow {
  std::array<double, 5> v{};

  double operator[](int i) const { return v[i]; }
  StencilWindow reversed() const { return {{v[4], v[3], v[2], v[1], v[0]}}; }
};

struct SmoothnessTriple {
  std::array<double, 3> beta{};
  double operator[](int s) const { return beta[s]; }
};

struct WeightTriple {
  std::array<double, 3> w{};
  double operator[](int s) const { return w[s]; }
  double sum() const { return (w[0] + w[1]) + w[2]; }
  bool operator==(const WeightTriple&) const = default;
};

using SubstencilValues = std::array<double, 3>;

/// Linear weights of the left-biased interface value.
struct IdealWeights {
  std::array<double, 3> d{0.1, 0.6, 0.3};
  double operator[](int s) const { return d[s]; }
};
inline constexpr IdealWeights kIdealWeights{};

inline constexpr double kDefaultEpsilon = 1e-6;

/// Validated positive regularization constant of the JS weights.
class Epsilon {
 public:
  constexpr Epsilon() = default;
  explicit Epsilon(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError("eps must be a positive real", "eps");
  }
  constexpr double value() const { return value_; }

 private:
  double value_ = kDefaultEpsilon;
};

namespace detail {

// Written so that reversing (a, b, c) reproduces the mirrored indicator
// bit for bit: only commutative additions touch the swapped operands.
WENO_HOT_INLINE double beta_left_end(double a, double b, double c) {
  const double s = (a + c) - 2.0 * b;
  const double t = (a + 3.0 * c) - 4.0 * b;
  return (13.0 / 12.0) * (s * s) + 0.25 * (t * t);
}
WENO_HOT_INLINE double beta_middle(double a, double b, double c) {
  const double s = (a + c) - 2.0 * b;
  const double t = a - c;
  return (13.0 / 12.0) * (s * s) + 0.25 * (t * t);
}
WENO_HOT_INLINE double beta_right_end(double a, double b, double c) {
  const double s = (a + c) - 2.0 * b;
  const double t = (3.0 * a + c) - 4.0 * b;
  return (13.0 / 12.0) * (s * s) + 0.25 * (t * t);
}

}  // namespace detail

WENO_HOT_INLINE SmoothnessTriple smoothness_indicators(const StencilWindow& w) {
  return {{detail::beta_left_end(w[0], w[1], w[2]), detail::beta_middle(w[1], w[2], w[3]),
           detail::beta_right_end(w[2], w[3], w[4])}};
}

/// Third-order candidate values at x_{j+1/2}. The third candidate uses the
/// coefficient -1 on u_{j+2} so that constants are reproduced.
WENO_HOT_INLINE SubstencilValues substencil_values(const StencilWindow& w) {
  constexpr double sixth = 1.0 / 6.0;
  return {(2.0 * w[0] - 7.0 * w[1] + 11.0 * w[2]) * sixth, (-w[1] + 5.0 * w[2] + 2.0 * w[3]) * sixth,
          (2.0 * w[2] + 5.0 * w[3] - w[4]) * sixth};
}

WENO_HOT_INLINE WeightTriple js_weights(const SmoothnessTriple& beta, Epsilon eps = {},
                               const IdealWeights& d = kIdealWeights) {
  const double e = eps.value();
  std::array<double, 3> a{};
  for (int s = 0; s < 3; ++s) {
    const double q = e + beta[s];
    a[s] = d[s] / (q * q);
  }
  const double inv = 1.0 / ((a[0] + a[1]) + a[2]);
  return {{a[0] * inv, a[1] * inv, a[2] * inv}};
}

WENO_HOT_INLINE double convex_combine(const WeightTriple& omega, const SubstencilValues& u) {
  return omega[0] * u[0] + omega[1] * u[1] + omega[2] * u[2];
}

/// Raw mapped values alpha_s = g_s(omega_s) and their normalization.
struct MappedWeights {
  std::array<double, 3> alpha{};
  WeightTriple omega;
  /// Set when sum(alpha) == 0 and the unmapped weights were kept.
  bool fallback = false;
};

/// Everything produced on the way to one interface value; diagnostics read
/// the intermediate triples, the solver only the value.
struct Reconstruction {
  double value = 0.0;
  SmoothnessTriple beta;
  WeightTriple omega_js;
  std::array<double, 3> alpha{};
  WeightTriple omega;
  bool fallback = false;
};

/// Mapping strategy concept: `MappedWeights operator()(const WeightTriple&) const`.
struct NoMapping {
  MappedWeights operator()(const WeightTriple& w) const { return {w.w, w, false}; }
};

template <class Mapping>
WENO_HOT_INLINE Reconstruction reconstruct_from(const StencilWindow& w, const SmoothnessTriple& beta, const Mapping& map,
                                Epsilon eps) {
  Reconstruction r;
  r.beta = beta;
  r.omega_js = js_weights(beta, eps);
  const MappedWeights mapped = map(r.omega_js);
  r.alpha = mapped.alpha;
  r.omega = mapped.omega;
  r.fallback = mapped.fallback;
  r.value = convex_combine(r.omega, substencil_values(w));
  return r;
}

/// Left-biased value u^-_{j+1/2}.
template <class Mapping = NoMapping>
WENO_HOT_INLINE Reconstruction reconstruct_left_detail(const StencilWindow& w, const Mapping& map = {}, Epsilon eps = {}) {
  return reconstruct_from(w, smoothness_indicators(w), map, eps);
}

template <class Mapping = NoMapping>
double reconstruct_left(const StencilWindow& w, const Mapping& map = {}, Epsilon eps = {}) {
  return reconstruct_left_detail(w, map, eps).value;
}

/// Right-biased value u^+_{j-1/2}: the left-biased procedure on the mirrored window.
template <class Mapping = NoMapping>
double reconstruct_right(const StencilWindow& w, const Mapping& map = {}, Epsilon eps = {}) {
  return reconstruct_left_detail(w.reversed(), map, eps).value;
}

/// Both biased reconstructions centered on cell j: u^-_{j+1/2} and u^+_{j-1/2}.
/// Bitwise identical to the separate calls; the indicators are shared.
struct BiasedPair {
  Reconstruction minus;  // left-biased, at x_{j+1/2}
  Reconstruction plus;   // right-biased, at x_{j-1/2}
};

template <class Mapping>
WENO_HOT_INLINE BiasedPair reconstruct_both(const StencilWindow& w, const Mapping& map, Epsilon eps) {
  const SmoothnessTriple beta = smoothness_indicators(w);
  const SmoothnessTriple mirrored{{beta[2], beta[1], beta[0]}};
  return {reconstruct_from(w, beta, map, eps), reconstruct_from(w.reversed(), mirrored, map, eps)};
}

}  // namespace weno
