#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "weno/problems.hpp"

namespace {

using namespace weno;
constexpr double pi = std::numbers::pi;

TEST(Profiles, SineAveragesMatchAntiderivative) {
  const auto g = build_grid_1d(-1.0, 1.0, 40);
  const auto u = ic_smooth(Profile1D::sine, g);
  for (int j = 0; j < 40; ++j) {
    const double exact = (std::cos(pi * g.face(j)) - std::cos(pi * g.face(j + 1))) / (pi * g.dx);
    EXPECT_NEAR(u[j], exact, 1e-13);
  }
}

TEST(Profiles, OddProfilesHaveAntisymmetricAverages) {
  for (auto p : {Profile1D::sine9, Profile1D::sine_critical}) {
    const auto g = build_grid_1d(-1.0, 1.0, 200);
    const auto u = ic_smooth(p, g);
    double mass = 0.0;
    for (int j = 0; j < 200; ++j) {
      EXPECT_NEAR(u[j], -u[199 - j], 1e-14);
      mass += u[j] * g.dx;
    }
    EXPECT_NEAR(mass, 0.0, 1e-14);
  }
  EXPECT_THROW(ic_smooth(Profile1D::slp, build_grid_1d(-1.0, 1.0, 10)), ConfigError);
}

TEST(Profiles, SineNinthPointValues) {
  EXPECT_NEAR(profile_value(Profile1D::sine9, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(profile_value(Profile1D::sine9, 1.0 / 6.0), std::pow(0.5, 9), 1e-15);
}

TEST(Profiles, SlpBranches) {
  const double gauss_side = std::pow(2.0, -1.0 / 36.0);
  EXPECT_NEAR(profile_value(Profile1D::slp, -0.7), (4.0 + 2.0 * gauss_side) / 6.0, 1e-14);
  EXPECT_EQ(profile_value(Profile1D::slp, -0.3), 1.0);
  EXPECT_NEAR(profile_value(Profile1D::slp, 0.1), 1.0, 1e-15);
  EXPECT_NEAR(profile_value(Profile1D::slp, 0.05), 0.5, 1e-14);
  EXPECT_NEAR(profile_value(Profile1D::slp, 0.5), (4.0 + 2.0 * std::sqrt(0.9975)) / 6.0, 1e-14);
  for (double x : {-0.9, -0.5, -0.1, 0.3, 0.7, 0.95}) EXPECT_EQ(profile_value(Profile1D::slp, x), 0.0);
}

TEST(Profiles, BicwpAveragesArePlateauValues) {
  const auto g = build_grid_1d(-1.0, 1.0, 800);
  const auto u = ic_bicwp(g);
  int ones = 0, halves = 0;
  for (int j = 0; j < 800; ++j) {
    const double v = u[j];
    EXPECT_TRUE(v == 0.0 || v == 0.5 || v == 1.0) << j << " " << v;
    ones += v == 1.0;
    halves += v == 0.5;
  }
  EXPECT_EQ(ones, 240);
  EXPECT_EQ(halves, 240);
}

TEST(ExactAdvection, PeriodAndShift) {
  const auto g = build_grid_1d(-1.0, 1.0, 40);
  for (auto p : {Profile1D::slp, Profile1D::sine9}) {
    const auto u0 = ic_profile(p, g);
    const auto u2 = exact_advection(p, 2.0, g);
    const auto u4 = exact_advection(p, 4.0, g);
    const auto half = exact_advection(p, 0.5, g);  // ten cells to the right
    for (int j = 0; j < 40; ++j) {
      EXPECT_EQ(u2[j], u0[j]);
      EXPECT_EQ(u4[j], u0[j]);
      EXPECT_NEAR(half[j], u0[(j + 30) % 40], 1e-13);
    }
  }
}

TEST(Riemann, QuadrantStatesAndEnergy) {
  const auto g = build_grid_2d(0.0, 1.0, 6, 0.0, 1.0, 6);
  const auto q = ic_riemann2d_config4(g);
  EXPECT_DOUBLE_EQ(q(0, 5, 5), 1.1);
  EXPECT_DOUBLE_EQ(q(3, 5, 5), 2.75);
  EXPECT_DOUBLE_EQ(q(0, 0, 5), 0.5065);
  EXPECT_DOUBLE_EQ(q(1, 0, 5), 0.5065 * 0.8939);
  EXPECT_DOUBLE_EQ(q(2, 0, 5), 0.0);
  EXPECT_DOUBLE_EQ(q(1, 0, 0), 1.1 * 0.8939);
  EXPECT_DOUBLE_EQ(q(2, 0, 0), 1.1 * 0.8939);
  EXPECT_DOUBLE_EQ(q(3, 0, 0), 1.1 / 0.4 + 1.1 * 0.8939 * 0.8939);
  EXPECT_DOUBLE_EQ(q(1, 5, 0), 0.0);
  EXPECT_DOUBLE_EQ(q(2, 5, 0), 0.5065 * 0.8939);
}

TEST(ShockVortex, RightState) {
  const auto r = shock_vortex_right_state();
  EXPECT_NEAR(r[0], 1.2054795, 1e-6);
  EXPECT_NEAR(r[1], -0.1891971, 1e-6);
  EXPECT_EQ(r[2], 0.0);
  EXPECT_EQ(r[3], 1.3);
  EXPECT_NEAR(r[0], 3.52 / 2.92, 1e-15);
}

TEST(ShockVortex, VortexPerturbation) {
  const double dT = -0.4 * 0.09 * std::exp(2.0 * 0.204) / (4.0 * 0.204 * 1.4);
  const auto c = vortex_perturbation(0.25, 0.5);
  EXPECT_NEAR(c[0], dT / 0.4, 1e-15);
  EXPECT_NEAR(c[3], 1.4 * dT / 0.4, 1e-15);
  EXPECT_EQ(c[1], 0.0);
  EXPECT_EQ(c[2], 0.0);
  // one core radius above the center: r = 1
  const auto a = vortex_perturbation(0.25, 0.55);
  EXPECT_NEAR(a[1], 0.3, 1e-15);
  EXPECT_NEAR(a[2], 0.0, 1e-15);
  // the swirl peaks near r = 1.6 and decays beyond
  double prev = 1.0;
  for (double r : {2.0, 3.0, 5.0}) {
    const auto d = vortex_perturbation(0.25 + 0.05 * r, 0.5);
    EXPECT_LT(std::abs(d[2]), prev);
    prev = std::abs(d[2]);
  }
  EXPECT_LT(prev, 0.02);
}

TEST(ShockVortex, InitialField) {
  const auto g = build_grid_2d(0.0, 1.0, 20, 0.0, 1.0, 20);
  const auto q = ic_shock_vortex(g);
  const auto r = shock_vortex_right_state();
  EXPECT_NEAR(q(0, 15, 3), r[0], 1e-15);
  EXPECT_NEAR(q(1, 15, 3), r[0] * r[1], 1e-15);
  EXPECT_NEAR(q(3, 15, 3), 1.3 / 0.4 + 0.5 * r[0] * r[1] * r[1], 1e-14);
  // corner cell of the left state is barely perturbed
  EXPECT_NEAR(q(0, 0, 0), 1.0, 1e-3);
  EXPECT_NEAR(q(1, 0, 0), std::sqrt(1.4), 1e-3);
}

TEST(Registry, Entries) {
  for (const auto& name : problem_names()) {
    const auto p = registry_lookup(name);
    EXPECT_EQ(p.name, name);
    EXPECT_FALSE(p.resolutions.empty());
    EXPECT_GT(p.t_end, 0.0);
    EXPECT_EQ(p.eps, 1e-40);
  }
  const auto sine = registry_lookup("accuracy-sine");
  EXPECT_EQ(sine.resolutions, (std::vector<int>{10, 20, 40, 80, 160, 320}));
  EXPECT_EQ(sine.t_end, 2.0);
  EXPECT_EQ(sine.stepping.mode, DtMode::accuracy_cfl);
  EXPECT_TRUE(sine.has_exact);

  const auto slp = registry_lookup("slp-long");
  EXPECT_EQ(slp.resolutions, std::vector<int>{800});
  EXPECT_EQ(slp.t_end, 2000.0);
  EXPECT_EQ(slp.stepping.cfl, 0.1);
  EXPECT_EQ(registry_lookup("slp-long", Preset::desk).resolutions, std::vector<int>{200});

  const auto rm = registry_lookup("riemann2d-c4");
  EXPECT_EQ(rm.kind, ProblemKind::riemann2d_c4);
  EXPECT_EQ(rm.dimension, 2);
  EXPECT_EQ(rm.t_end, 0.25);
  EXPECT_EQ(rm.boundary, BoundaryKind::transmissive);
  EXPECT_EQ(registry_lookup("shock-vortex").t_end, 0.35);

  try {
    registry_lookup("kelvin-helmholtz");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "problem");
  }
}

}  // namespace
