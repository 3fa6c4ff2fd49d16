#pragma once

// Mapping functions g_s(omega) applied to the JS weights, the order-preserving
// (OP) set classifier and the per-point non-OP detector.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "weno/errors.hpp"
#include "weno/kernel.hpp"

namespace weno {

/// Ideal weights sorted ascending with the midpoints between neighbours.
struct SortedIdealWeights {
  std::array<double, 3> d{0.1, 0.3, 0.6};
  std::array<double, 2> midpoints{0.2, 0.45};
};

/// Literal constants of the fifth-order case; `sorted_ideal_weights` derives
/// the same partition for arbitrary linear weights.
inline constexpr SortedIdealWeights kSortedIdealWeights{};

inline SortedIdealWeights sorted_ideal_weights(const IdealWeights& ideal) {
  SortedIdealWeights out;
  out.d = ideal.d;
  std::sort(out.d.begin(), out.d.end());
  out.midpoints = {0.5 * (out.d[0] + out.d[1]), 0.5 * (out.d[1] + out.d[2])};
  return out;
}

// ---------------------------------------------------------------------------
// Scalar mapping functions

namespace detail {
WENO_HOT_INLINE double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace detail

/// Henrick et al. mapping (WENO-M).
WENO_HOT_INLINE double map_m(double omega, int s, const IdealWeights& ideal = kIdealWeights) {
  const double d = ideal[s];
  return omega * (d + d * d - 3.0 * d * omega + omega * omega) / (d * d + (1.0 - 2.0 * d) * omega);
}

/// Piecewise polynomial mapping (WENO-PMk).
WENO_HOT_INLINE double map_pm(double omega, int s, int k, const IdealWeights& ideal = kIdealWeights) {
  const double d = ideal[s];
  const double kp1 = k + 1.0;
  double c1, c2;
  if (omega <= d) {
    c1 = ((k % 2 == 0) ? 1.0 : -1.0) * kp1 / detail::ipow(d, k + 1);
    c2 = d / kp1;
  } else {
    c1 = -kp1 / detail::ipow(1.0 - d, k + 1);
    c2 = (d - (k + 2.0)) / kp1;
  }
  return c1 * detail::ipow(omega - d, k + 1) * (omega + c2) + d;
}

/// Improved mapping WENO-IM(k, A). Well defined at omega in {0, 1}: the
/// A(omega - d)^k term keeps the denominator positive.
WENO_HOT_INLINE double map_im(double omega, int s, int k, double A,
                               const IdealWeights& ideal = kIdealWeights) {
  const double d = ideal[s];
  const double diff = omega - d;
  const double pk = detail::ipow(diff, k);
  return d + (pk * diff * A) / (pk * A + omega * (1.0 - omega));
}

struct MipAcmkParams {
  std::array<double, 3> cfs{0.01, 0.06, 0.03};
  std::array<double, 3> k{0.0, 0.0, 0.0};
  bool operator==(const MipAcmkParams&) const = default;
};

/// Upper threshold 1 - (1 - d_s)/d_s * CFS_s of the MIP plateau.
WENO_HOT_INLINE double mip_upper_threshold(double cfs, double d) { return 1.0 - (1.0 - d) / d * cfs; }

/// Monotone increasing piecewise ACMk mapping:
/// k_s w on [0, CFS_s), d_s on [CFS_s, CFSbar_s], 1 - k_s (1 - w) above.
WENO_HOT_INLINE double map_mip_acmk(double omega, int s, const MipAcmkParams& p,
                                    const IdealWeights& ideal = kIdealWeights) {
  const double d = ideal[s];
  const double g = omega <= mip_upper_threshold(p.cfs[s], d) ? d : 1.0 - p.k[s] * (1.0 - omega);
  return omega < p.cfs[s] ? p.k[s] * omega : g;
}

struct MopAcmkParams {
  double cfs0 = 0.01;
  double cfs1 = 0.94;
  double k0 = 0.0;
  double k1 = 0.0;
  bool operator==(const MopAcmkParams&) const = default;
};

/// Order-preserving ACMk mapping; the same function for every substencil.
/// Intervals: [0,CFS0) [CFS0,0.2) [0.2,0.45) [0.45,CFS1] (CFS1,1].
WENO_HOT_INLINE double map_mop_acmk(double omega, const MopAcmkParams& p,
                                    const SortedIdealWeights& sorted = kSortedIdealWeights) {
  if (omega < p.cfs0) return p.k0 * omega;
  if (omega < sorted.midpoints[0]) return sorted.d[0];
  if (omega < sorted.midpoints[1]) return sorted.d[1];
  if (omega <= p.cfs1) return sorted.d[2];
  return 1.0 - p.k1 * (1.0 - omega);
}

// ---------------------------------------------------------------------------
// Mapping specs

namespace mapping {

struct Js {
  WENO_HOT_INLINE double g(double omega, int) const { return omega; }
  bool operator==(const Js&) const = default;
};

struct M {
  WENO_HOT_INLINE double g(double omega, int s) const { return map_m(omega, s); }
  bool operator==(const M&) const = default;
};

struct Pm {
  int k = 6;
  WENO_HOT_INLINE double g(double omega, int s) const { return map_pm(omega, s, k); }
  bool operator==(const Pm&) const = default;
};

struct Im {
  int k = 2;
  double A = 0.1;
  WENO_HOT_INLINE double g(double omega, int s) const { return map_im(omega, s, k, A); }
  bool operator==(const Im&) const = default;
};

struct MipAcmk {
  MipAcmkParams params;
  WENO_HOT_INLINE double g(double omega, int s) const { return map_mip_acmk(omega, s, params); }
  bool operator==(const MipAcmk&) const = default;
};

struct MopAcmk {
  MopAcmkParams params;
  WENO_HOT_INLINE double g(double omega, int) const { return map_mop_acmk(omega, params); }
  bool operator==(const MopAcmk&) const = default;
};

}  // namespace mapping

using MappingSpec =
    std::variant<mapping::Js, mapping::M, mapping::Pm, mapping::Im, mapping::MipAcmk, mapping::MopAcmk>;

/// Default MIP parameters: k_s = 0, CFS_s = d_s / 10.
inline MipAcmkParams default_mip_params() {
  MipAcmkParams p;
  for (int s = 0; s < 3; ++s) p.cfs[s] = kIdealWeights[s] / 10.0;
  return p;
}

/// alpha_s = g_s(omega_s), omega = alpha / sum(alpha). Identity passes the
/// triple through untouched; a vanishing sum keeps the unmapped weights.
template <class G>
WENO_HOT_INLINE MappedWeights apply_mapping(const WeightTriple& omega, const G& g) {
  if constexpr (std::is_same_v<G, mapping::Js>) {
    return {omega.w, omega, false};
  } else {
    MappedWeights out;
    for (int s = 0; s < 3; ++s) out.alpha[s] = g.g(omega[s], s);
    const double total = (out.alpha[0] + out.alpha[1]) + out.alpha[2];
    if (total == 0.0) {
      out.omega = omega;
      out.fallback = true;
      return out;
    }
    const double inv = 1.0 / total;
    out.omega = {{out.alpha[0] * inv, out.alpha[1] * inv, out.alpha[2] * inv}};
    return out;
  }
}

inline MappedWeights apply_mapping(const WeightTriple& omega, const MappingSpec& spec) {
  return std::visit([&](const auto& g) { return apply_mapping(omega, g); }, spec);
}

/// Adapts a concrete mapping to the kernel's strategy concept.
template <class G>
struct MappingStrategy {
  G g;
  WENO_HOT_INLINE MappedWeights operator()(const WeightTriple& w) const { return apply_mapping(w, g); }
};

template <class G>
MappingStrategy(G) -> MappingStrategy<G>;

namespace detail {

// Exponent fixed at compile time; same arithmetic as the runtime form.
template <int K>
struct PmFixed {
  WENO_HOT_INLINE double g(double omega, int s) const { return map_pm(omega, s, K); }
};
template <int K>
struct ImFixed {
  double A;
  WENO_HOT_INLINE double g(double omega, int s) const { return map_im(omega, s, K, A); }
};

}  // namespace detail

/// Calls f(strategy) with a concrete kernel strategy for the spec. Default
/// PM and IM exponents get a specialization.
template <class F>
decltype(auto) dispatch_mapping(const MappingSpec& spec, F&& f) {
  return std::visit(
      [&](const auto& g) -> decltype(auto) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, mapping::Pm>) {
          if (g.k == 6) return f(MappingStrategy<detail::PmFixed<6>>{});
        } else if constexpr (std::is_same_v<T, mapping::Im>) {
          if (g.k == 2) return f(MappingStrategy<detail::ImFixed<2>>{{g.A}});
        }
        return f(MappingStrategy<T>{g});
      },
      spec);
}

/// g_s(omega) of any spec.
inline double mapping_value(const MappingSpec& spec, double omega, int s) {
  return std::visit([&](const auto& g) { return g.g(omega, s); }, spec);
}

/// Kernel entry points taking the tagged union.
inline Reconstruction reconstruct_left_detail(const StencilWindow& w, const MappingSpec& spec, Epsilon eps = {}) {
  return std::visit([&](const auto& g) { return reconstruct_left_detail(w, MappingStrategy{g}, eps); }, spec);
}
inline double reconstruct_left(const StencilWindow& w, const MappingSpec& spec, Epsilon eps = {}) {
  return reconstruct_left_detail(w, spec, eps).value;
}
inline double reconstruct_right(const StencilWindow& w, const MappingSpec& spec, Epsilon eps = {}) {
  return reconstruct_left_detail(w.reversed(), spec, eps).value;
}

// ---------------------------------------------------------------------------
// Names, validation, descriptors

/// Short configuration name: js, m, pm, im, mip-acmk, mop-acmk.
inline std::string scheme_name(const MappingSpec& spec) {
  static constexpr const char* names[] = {"js", "m", "pm", "im", "mip-acmk", "mop-acmk"};
  return names[spec.index()];
}

/// Human-readable label as used in result tables.
inline std::string scheme_label(const MappingSpec& spec) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, mapping::Js>) return "WENO-JS";
        if constexpr (std::is_same_v<T, mapping::M>) return "WENO-M";
        if constexpr (std::is_same_v<T, mapping::Pm>) return "WENO-PM" + std::to_string(g.k);
        if constexpr (std::is_same_v<T, mapping::Im>) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "WENO-IM(%d,%g)", g.k, g.A);
          return buf;
        }
        if constexpr (std::is_same_v<T, mapping::MipAcmk>) return "MIP-WENO-ACMk";
        if constexpr (std::is_same_v<T, mapping::MopAcmk>) return "MOP-WENO-ACMk";
      },
      spec);
}

/// Throws ConfigError naming the offending key when a parameter is out of range.
inline void validate(const MappingSpec& spec) {
  std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, mapping::Pm>) {
          if (g.k < 2 || g.k % 2 != 0) throw ConfigError("pm: k must be an even integer >= 2", "k");
        } else if constexpr (std::is_same_v<T, mapping::Im>) {
          if (g.k < 2 || g.k % 2 != 0) throw ConfigError("im: k must be a positive even integer", "k");
          if (!(g.A > 0.0) || !std::isfinite(g.A)) throw ConfigError("im: A must be positive", "A");
        } else if constexpr (std::is_same_v<T, mapping::MipAcmk>) {
          for (int s = 0; s < 3; ++s) {
            const double d = kIdealWeights[s];
            const double cfs = g.params.cfs[s];
            if (!(cfs > 0.0 && cfs < d)) {
              throw ConfigError("mip-acmk: cfs" + std::to_string(s) + " must lie in (0, d_s)", "cfs" + std::to_string(s));
            }
            const double k = g.params.k[s];
            if (!(k >= 0.0 && k <= d / cfs)) {
              throw ConfigError("mip-acmk: k" + std::to_string(s) + " must lie in [0, d_s/cfs_s]", "k" + std::to_string(s));
            }
          }
        } else if constexpr (std::is_same_v<T, mapping::MopAcmk>) {
          const auto& p = g.params;
          const auto& sd = kSortedIdealWeights.d;
          if (!(p.cfs0 > 0.0 && p.cfs0 <= sd[0])) throw ConfigError("mop-acmk: cfs0 must lie in (0, 0.1]", "cfs0");
          if (!(p.cfs1 >= sd[2] && p.cfs1 < 1.0)) throw ConfigError("mop-acmk: cfs1 must lie in [0.6, 1)", "cfs1");
          if (!(p.k0 >= 0.0 && p.k0 <= sd[0] / p.cfs0)) {
            throw ConfigError("mop-acmk: k0 must lie in [0, 0.1/cfs0]", "k0");
          }
          if (!(p.k1 >= 0.0 && p.k1 <= (1.0 - sd[2]) / (1.0 - p.cfs1))) {
            throw ConfigError("mop-acmk: k1 must lie in [0, 0.4/(1-cfs1)]", "k1");
          }
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Order-preservation checks

/// Equality band for weight comparisons.
inline constexpr double kOpTolerance = 1e-12;

struct NonOpVerdict {
  bool nonop = false;
  int m = -1;
  int n = -1;
};

/// Pointwise test on one interface. For |w_m - w_n| > tol a pair violates
/// when (w_m - w_n)(g_m - g_n) < -tol^2, i.e. a strict inversion; equal
/// images of distinct weights (plateaus) are accepted. For |w_m - w_n| <= tol
/// the images must agree within tol. Returns the first violating pair in
/// (0,1), (0,2), (1,2) order.
inline NonOpVerdict is_nonop_instance(const WeightTriple& before, const std::array<double, 3>& mapped,
                                      double tol = kOpTolerance) {
  static constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [m, n] : pairs) {
    const double dw = before[m] - before[n];
    const double dg = mapped[m] - mapped[n];
    const bool violated = std::abs(dw) > tol ? dw * dg < -(tol * tol) : std::abs(dg) > tol;
    if (violated) return {true, m, n};
  }
  return {};
}

struct OpWitness {
  double omega_a = 0.0;  // omega_a >= omega_b
  double omega_b = 0.0;
  int m = -1;
  int n = -1;
  double g_a = 0.0;  // g_m(omega_a)
  double g_b = 0.0;  // g_n(omega_b)
};

struct OpClassification {
  bool order_preserving = true;
  std::vector<OpWitness> witnesses;
};

/// Sampling certificate of the OP property on a uniform omega grid of
/// `sample_count` points: for omega_a > omega_b every g_m(omega_a) must be
/// >= every g_n(omega_b); for equal arguments all images must agree. Equal
/// images of ordered arguments (plateaus) are accepted.
inline OpClassification classify_op_set(const MappingSpec& spec, int sample_count = 1001,
                                        std::size_t max_witnesses = 16, double tol = kOpTolerance) {
  if (sample_count < 100) throw ConfigError("classify needs at least 100 samples", "samples");
  OpClassification out;
  std::vector<double> omega(sample_count);
  for (int i = 0; i < sample_count; ++i) omega[i] = static_cast<double>(i) / (sample_count - 1);

  // Running maximum of g_n over all earlier (smaller) samples.
  double prev_max = -1.0;
  int prev_arg = -1, prev_s = -1;
  for (int i = 0; i < sample_count && out.witnesses.size() < max_witnesses; ++i) {
    std::array<double, 3> g{};
    for (int s = 0; s < 3; ++s) g[s] = mapping_value(spec, omega[i], s);

    for (int m = 0; m < 3 && out.witnesses.size() < max_witnesses; ++m) {
      for (int n = 0; n < 3; ++n) {
        if (m != n && std::abs(g[m] - g[n]) > tol && g[m] < g[n]) {
          out.witnesses.push_back({omega[i], omega[i], m, n, g[m], g[n]});
          break;
        }
      }
    }
    if (prev_arg >= 0) {
      for (int m = 0; m < 3 && out.witnesses.size() < max_witnesses; ++m) {
        if (g[m] < prev_max - tol) {
          out.witnesses.push_back({omega[i], omega[prev_arg], m, prev_s, g[m], prev_max});
          break;
        }
      }
    }
    for (int s = 0; s < 3; ++s) {
      if (g[s] > prev_max) {
        prev_max = g[s];
        prev_arg = i;
        prev_s = s;
      }
    }
  }
  out.order_preserving = out.witnesses.empty();
  return out;
}

}  // namespace weno
