#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "weno/mesh.hpp"

namespace {

using weno::BoundaryKind;

TEST(Grid1D, SpacingAndCenters) {
  const auto g = weno::build_grid_1d(-1.0, 1.0, 400);
  EXPECT_DOUBLE_EQ(g.dx, 0.005);
  EXPECT_DOUBLE_EQ(g.center(0), -0.9975);
  EXPECT_DOUBLE_EQ(g.face(400), 1.0);
  EXPECT_DOUBLE_EQ(weno::build_grid_1d(0.0, 1.0, 800).dx, 0.00125);
}

TEST(Grid1D, RejectsBadInput) {
  EXPECT_THROW(weno::build_grid_1d(-1.0, 1.0, 4), weno::ConfigError);
  EXPECT_THROW(weno::build_grid_1d(1.0, 1.0, 10), weno::ConfigError);
  EXPECT_THROW(weno::build_grid_1d(0.0, 1.0, 10, 2), weno::ConfigError);
  try {
    weno::build_grid_1d(-1.0, 1.0, 4);
  } catch (const weno::ConfigError& e) {
    EXPECT_EQ(e.key(), "N");
  }
}

TEST(CellField1D, StorageLength) {
  const auto g = weno::build_grid_1d(0.0, 1.0, 10);
  weno::CellField1D f(g, 2);
  EXPECT_EQ(f.values.size(), 2u * (10 + 2 * 3));
  EXPECT_EQ(f.interior(1).size(), 10u);
}

weno::CellField1D letters(int n) {
  weno::CellField1D f(weno::build_grid_1d(0.0, 1.0, n), 1);
  for (int j = 0; j < n; ++j) f[j] = j + 1.0;
  return f;
}

TEST(FillGhost, Periodic) {
  auto f = letters(5);
  weno::fill_ghost(f, {});
  EXPECT_EQ(f[-1], 5.0);
  EXPECT_EQ(f[-2], 4.0);
  EXPECT_EQ(f[-3], 3.0);
  EXPECT_EQ(f[5], 1.0);
  EXPECT_EQ(f[6], 2.0);
  EXPECT_EQ(f[7], 3.0);
}

TEST(FillGhost, Transmissive) {
  auto f = letters(6);
  weno::fill_ghost(f, {BoundaryKind::transmissive, BoundaryKind::transmissive});
  for (int g = 1; g <= 3; ++g) {
    EXPECT_EQ(f[-g], 1.0);
    EXPECT_EQ(f[5 + g], 6.0);
  }
}

TEST(FillGhost, TwoDimensionalCorners) {
  const auto g = weno::build_grid_2d(0.0, 1.0, 5, 0.0, 1.0, 6);
  weno::CellField2D q(g, 1);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 5; ++i) q(0, i, j) = 10.0 * j + i;
  weno::fill_ghost(q, weno::Boundaries2D{BoundaryKind::periodic, BoundaryKind::periodic, BoundaryKind::periodic,
                                         BoundaryKind::periodic});
  EXPECT_EQ(q(0, -1, -1), q(0, 4, 5));
  EXPECT_EQ(q(0, 5, 6), q(0, 0, 0));
  weno::fill_ghost(q, weno::Boundaries2D{});
  EXPECT_EQ(q(0, -3, -3), q(0, 0, 0));
  EXPECT_EQ(q(0, 7, 8), q(0, 4, 5));
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int n : {1, 2, 5, 20}) {
    const auto& rule = weno::gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
    // degree 2n-1 is integrated exactly: x^(2n-2) over [-1,1] = 2/(2n-1)
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += rule.weights[k] * std::pow(rule.nodes[k], 2 * n - 2);
    EXPECT_NEAR(acc, 2.0 / (2 * n - 1), 1e-14) << n;
  }
  EXPECT_THROW(weno::gauss_legendre(0), weno::ConfigError);
}

TEST(CellAverage, ConstantIsExact) {
  const auto g = weno::build_grid_1d(-1.0, 1.0, 37);
  const auto f = weno::cell_average_ic(g, [](double) { return 1.0; }, 5);
  for (double v : f.interior()) EXPECT_EQ(v, 1.0);
}

TEST(CellAverage, SineMatchesAntiderivative) {
  constexpr double pi = std::numbers::pi;
  const auto g = weno::build_grid_1d(-1.0, 1.0, 80);
  const auto f = weno::cell_average_ic(g, [](double x) { return std::sin(pi * x); }, 5);
  for (int j = 0; j < g.n_cells; ++j) {
    const double exact = (std::cos(pi * g.face(j)) - std::cos(pi * g.face(j + 1))) / (pi * g.dx);
    EXPECT_NEAR(f[j], exact, 1e-13);
  }
}

TEST(CellAverage, NonFiniteSampleThrows) {
  const auto g = weno::build_grid_1d(0.0, 1.0, 10);
  EXPECT_THROW(weno::cell_average_ic(g, [](double x) { return x > 0.5 ? NAN : 0.0; }, 3), weno::DataError);
}

TEST(SplitAverage, StepFunctionSplitAtBreak) {
  const double breaks[] = {0.25};
  auto step = [](double x) { return x > 0.25 ? 1.0 : 0.0; };
  EXPECT_NEAR(weno::split_average(step, 0.0, 1.0, breaks, 4, false), 0.75, 1e-15);
  EXPECT_NEAR(weno::split_average(step, 0.0, 1.0, breaks, 4, true), 0.75, 1e-15);
}

TEST(Snapshot, WritesCentersAndValues) {
  auto f = letters(5);
  std::ostringstream os;
  weno::write_snapshot_csv(os, f);
  EXPECT_EQ(os.str().substr(0, 4), "x,u\n");
  EXPECT_NE(os.str().find("0.10000000000000001,1\n"), std::string::npos);
}

TEST(Finite, DetectsNaN) {
  auto f = letters(5);
  EXPECT_TRUE(weno::interior_finite(f));
  f[2] = NAN;
  EXPECT_FALSE(weno::interior_finite(f));
}

}  // namespace
