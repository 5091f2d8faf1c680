#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "macflow/dynamics.hpp"
#include "macflow/field.hpp"
#include "macflow/initial.hpp"
#include "macflow/spectral.hpp"
#include "oracles.hpp"

using namespace macflow;

constexpr double kPi = std::numbers::pi;

TEST(Grid, Geometry) {
  const Grid g(2, 16);
  EXPECT_EQ(g.node_count(), 256u);
  EXPECT_DOUBLE_EQ(g.spacing() * g.n(), g.length());
  EXPECT_EQ(g.spacing() * g.n(), 2.0 * kPi);
  EXPECT_DOUBLE_EQ(g.coordinate(0), -kPi);
  EXPECT_DOUBLE_EQ(g.coordinate(8), 0.0);
  EXPECT_DOUBLE_EQ(g.volume(), 4.0 * kPi * kPi);
  EXPECT_DOUBLE_EQ(g.cell_volume() * static_cast<double>(g.node_count()), g.volume());
  const Grid g1(1, 8, 3.0);
  EXPECT_EQ(g1.node_count(), 8u);
  EXPECT_DOUBLE_EQ(g1.cell_volume(), 3.0 / 8.0);
}

TEST(Grid, RejectsInvalid) {
  EXPECT_THROW(Grid(3, 16), UsageError);
  EXPECT_THROW(Grid(2, 12), UsageError);
  EXPECT_THROW(Grid(2, 4), UsageError);
  EXPECT_THROW(Grid(1, 16, 0.0), UsageError);
  EXPECT_THROW(Grid(1, 16, -1.0), UsageError);
}

TEST(MatrixField, ConstructionAndAccess) {
  const Grid g(1, 8);
  EXPECT_THROW(MatrixField(g, 2, std::vector<double>(31)), UsageError);
  std::vector<double> bad(32, 0.0);
  bad[5] = std::nan("");
  EXPECT_THROW(MatrixField(g, 2, bad), UsageError);
  MatrixField u = MatrixField::constant(g, SmallMat(2, {1, 2, 3, 4}));
  EXPECT_EQ(u.at(7), SmallMat(2, {1, 2, 3, 4}));
  u.set(3, SmallMat::identity(2));
  EXPECT_EQ(u.node(3)[0], 1.0);
  EXPECT_EQ(u.node(3)[1], 0.0);
  EXPECT_TRUE(u.all_finite());
}

TEST(Reductions, ConstantFields) {
  const Grid g(2, 8);
  EXPECT_DOUBLE_EQ(max_frobenius(MatrixField::constant(g, SmallMat::identity(3))), std::sqrt(3.0));
  EXPECT_EQ(max_frobenius(MatrixField(g, 3)), 0.0);
  EXPECT_DOUBLE_EQ(max_abs_det(MatrixField::constant(g, SmallMat::identity(2))), 1.0);
  EXPECT_EQ(max_abs_det(MatrixField(g, 2)), 0.0);
}

TEST(L2Difference, Examples) {
  const Grid g(2, 16);
  const MatrixField a = oracle::random_field(g, 2, 11, -1.0, 1.0);
  const MatrixField b = oracle::random_field(g, 2, 12, -1.0, 1.0);
  EXPECT_EQ(l2_difference(a, a), 0.0);
  EXPECT_NEAR(l2_difference(MatrixField::constant(g, SmallMat::identity(2)), MatrixField(g, 2)), 8.0 * kPi * kPi,
              1e-12);
  const double expect = oracle::naive_l2_difference(a, b);
  EXPECT_NEAR(l2_difference(a, b), expect, 1e-12 * expect);
  EXPECT_NEAR(l2_difference(a, b), l2_difference(b, a), 1e-14 * expect);
  EXPECT_EQ(l2_difference(a, b), l2_difference(a, b));
  MatrixField c = a;
  c.data()[17] += 1e-3;
  EXPECT_GT(l2_difference(a, c), 0.0);
  EXPECT_THROW(l2_difference(a, MatrixField(Grid(2, 8), 2)), UsageError);
  EXPECT_THROW(l2_difference(a, MatrixField(g, 3)), UsageError);
}

TEST(DetSignImage, Examples) {
  const Grid g(2, 8);
  const GrayImage id = det_sign_image(MatrixField::constant(g, SmallMat::identity(2)));
  EXPECT_EQ(id.width, 8);
  EXPECT_EQ(id.height, 8);
  for (auto p : id.pixels) EXPECT_EQ(p, 255);
  for (auto p : det_sign_image(MatrixField::constant(g, SmallMat::diagonal({1, -1}))).pixels) EXPECT_EQ(p, 0);
  for (auto p : det_sign_image(MatrixField(g, 2)).pixels) EXPECT_EQ(p, 128);
  EXPECT_THROW(det_sign_image(MatrixField(Grid(1, 8), 2)), UsageError);
}

TEST(DetSignImage, StructuredDataMatchesIndicator) {
  const Grid g(2, 64);
  const GrayImage img = det_sign_image(ic_structured(g));
  for (int iy = 0; iy < 64; ++iy) {
    for (int ix = 0; ix < 64; ++ix) {
      const double x = g.coordinate(ix), y = g.coordinate(iy);
      const double theta = std::atan2(x, y);
      const bool inside = std::sqrt(x * x + y * y) < 2.0 * kPi * (0.3 + 0.06 * std::sin(6.0 * theta));
      EXPECT_EQ(img.pixels[static_cast<std::size_t>(iy * 64 + ix)], inside ? 255 : 0) << ix << "," << iy;
    }
  }
}

TEST(Reductions, HeatDoesNotRaiseMaxFrobenius) {
  const Grid g(2, 32);
  const SpectralPlan plan(g);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MatrixField u = oracle::random_admissible_field(g, 3, seed);
    for (double t : {1e-3, 0.1, 1.0}) {
      EXPECT_LE(max_frobenius(heat_propagate(u, t, 1.0, plan)), max_frobenius(u) + 1e-10);
    }
  }
}

TEST(Reductions, TruncatedHeatKernelOvershootsAtJumps) {
  // The discrete multiplier exp(-t k^2), |k| <= n/2, is not a positive kernel
  // when t n^2 / 4 is small: a unit step overshoots. It becomes positive to
  // rounding once exp(-t n^2 / 4) is negligible.
  const Grid g(1, 64);
  const SpectralPlan plan(g);
  MatrixField step(g, 1);
  for (std::size_t k = 0; k < 32; ++k) step.node(k)[0] = 1.0;
  EXPECT_GT(max_frobenius(heat_propagate(step, 1e-3, 1.0, plan)), 1.0 + 1e-3);
  EXPECT_LE(max_frobenius(heat_propagate(step, 0.1, 1.0, plan)), 1.0 + 1e-10);
}

TEST(Reductions, AdmissibleFieldsHaveBoundedDeterminant) {
  const Grid g(2, 16);
  for (int m = 1; m <= 5; ++m) {
    const MatrixField u = oracle::random_admissible_field(g, m, 100 + static_cast<std::uint64_t>(m));
    EXPECT_LE(max_abs_det(u), 1.0 + 1e-10);
    EXPECT_LE(max_abs_det(nonlinear_flow_field(u, 0.3)), 1.0 + 1e-10);
  }
}
