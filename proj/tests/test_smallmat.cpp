#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "macflow/smallmat.hpp"
#include "oracles.hpp"

using namespace macflow;
using oracle::random_matrix;

namespace {

double orthogonality_residual(const SmallMat& q) {
  return (q.transposed() * q - SmallMat::identity(q.size())).frobenius_norm();
}

}  // namespace

TEST(SmallMat, RejectsBadConstruction) {
  EXPECT_THROW(SmallMat(2, {1.0, 2.0, 3.0}), UsageError);
  EXPECT_THROW(SmallMat(1, {std::numeric_limits<double>::quiet_NaN()}), UsageError);
  EXPECT_THROW(SmallMat(1, {std::numeric_limits<double>::infinity()}), UsageError);
}

TEST(SmallMat, Arithmetic) {
  const SmallMat a(2, {1, 2, 3, 4});
  const SmallMat b(2, {0, 1, 1, 0});
  EXPECT_EQ(a * b, SmallMat(2, {2, 1, 4, 3}));
  EXPECT_EQ(a.transposed(), SmallMat(2, {1, 3, 2, 4}));
  EXPECT_EQ(a.diagonal_part(), SmallMat::diagonal({1, 4}));
  EXPECT_DOUBLE_EQ(a.trace(), 5.0);
  EXPECT_DOUBLE_EQ(a.frobenius_norm(), std::sqrt(30.0));
  EXPECT_EQ(2.0 * a - a, a);
}

TEST(FrobeniusInner, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_inner(SmallMat::identity(4), SmallMat::identity(4)), 4.0);
  CounterRng rng(1);
  const SmallMat a = random_matrix(rng, 3);
  EXPECT_EQ(frobenius_inner(a, SmallMat(3)), 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const SmallMat x = random_matrix(rng, 3);
    const SmallMat y = random_matrix(rng, 3);
    double oracle_sum = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) oracle_sum += x(i, j) * y(i, j);
    EXPECT_NEAR(frobenius_inner(x, y), oracle_sum, 1e-14 * std::max(1.0, std::abs(oracle_sum)));
    EXPECT_EQ(frobenius_inner(x, y), frobenius_inner(y, x));
  }
  EXPECT_THROW(frobenius_inner(SmallMat(2), SmallMat(3)), UsageError);
}

TEST(Determinant, Examples) {
  for (int m = 1; m <= 5; ++m) EXPECT_DOUBLE_EQ(determinant(SmallMat::identity(m)), 1.0);
  EXPECT_DOUBLE_EQ(determinant(SmallMat::diagonal({2, -1})), -2.0);
  EXPECT_EQ(determinant(SmallMat(4, {1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 0, 1, 5, 5, 5, 5})), 0.0);
}

TEST(Determinant, MatchesLeibnizOracle) {
  CounterRng rng(2);
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 200; ++trial) {
      const SmallMat a = random_matrix(rng, m, -2.0, 2.0);
      const double expect = oracle::leibniz_determinant(a);
      EXPECT_NEAR(determinant(a), expect, 1e-10 * std::max(1.0, std::abs(expect))) << "m=" << m;
    }
  }
}

TEST(Svd, Examples) {
  for (int m = 1; m <= 5; ++m) {
    const SvdResult s = svd(SmallMat::identity(m));
    for (double v : s.singular_values) EXPECT_DOUBLE_EQ(v, 1.0);
  }
  const SvdResult s = svd(SmallMat::diagonal({-2, 1}));
  EXPECT_DOUBLE_EQ(s.singular_values[0], 2.0);
  EXPECT_DOUBLE_EQ(s.singular_values[1], 1.0);
}

TEST(Svd, InvariantsOnRandomMatrices) {
  CounterRng rng(3);
  for (int trial = 0; trial < 100000; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const SmallMat a = random_matrix(rng, m, -10.0, 10.0);
    const SvdResult s = svd(a);
    const double scale = std::max(1.0, a.frobenius_norm());
    ASSERT_LE((compose_svd(s, s.singular_values) - a).frobenius_norm(), 1e-12 * scale) << "trial " << trial;
    ASSERT_LE(orthogonality_residual(s.left), 1e-12) << "trial " << trial;
    ASSERT_LE(orthogonality_residual(s.right), 1e-12) << "trial " << trial;
    for (std::size_t i = 0; i < s.singular_values.size(); ++i) {
      ASSERT_GE(s.singular_values[i], 0.0);
      if (i > 0) {
        ASSERT_LE(s.singular_values[i], s.singular_values[i - 1]);
      }
    }
    const double nuc = nuclear_norm(a);
    ASSERT_GE(nuc, a.frobenius_norm() * (1.0 - 1e-14));
    ASSERT_GE(a.frobenius_norm() * (1.0 + 1e-14), s.singular_values[0]);
  }
}

TEST(Svd, SingularValuesMatchEigenOracle) {
  CounterRng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const SmallMat a = random_matrix(rng, m, -3.0, 3.0);
    const auto expect = oracle::singular_values(a);
    const auto got = svd(a).singular_values;
    for (int i = 0; i < m; ++i) EXPECT_NEAR(got[static_cast<std::size_t>(i)], expect[static_cast<std::size_t>(i)], 1e-11);
  }
}

TEST(Svd, SignConventionAndDeterminism) {
  CounterRng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = rng.uniform_int(2, 5);
    const SmallMat a = random_matrix(rng, m);
    const SvdResult s = svd(a);
    for (int c = 0; c < m; ++c) {
      int arg = 0;
      for (int r = 1; r < m; ++r)
        if (std::abs(s.left(r, c)) > std::abs(s.left(arg, c))) arg = r;
      EXPECT_GE(s.left(arg, c), 0.0);
    }
    const SvdResult again = svd(a);
    EXPECT_EQ(s.left, again.left);
    EXPECT_EQ(s.right, again.right);
    EXPECT_EQ(s.singular_values, again.singular_values);
  }
}

TEST(Svd, RankDeficientAndZero) {
  const SvdResult z = svd(SmallMat(3));
  for (double v : z.singular_values) EXPECT_EQ(v, 0.0);
  EXPECT_LE(orthogonality_residual(z.left), 1e-12);
  EXPECT_LE(orthogonality_residual(z.right), 1e-12);

  const SmallMat rank1(3, {1, 2, 3, 2, 4, 6, -1, -2, -3});
  const SvdResult r = svd(rank1);
  EXPECT_NEAR(r.singular_values[1], 0.0, 1e-12);
  EXPECT_LE((compose_svd(r, r.singular_values) - rank1).frobenius_norm(), 1e-12 * rank1.frobenius_norm());
  EXPECT_LE(orthogonality_residual(r.left), 1e-12);
}

TEST(Svd, NonFiniteInputIsNumericalFailure) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double v[] = {1.0, nan, 0.0, 1.0};
  EXPECT_THROW(svd(SmallMat::unchecked(2, v)), NumericalError);
}

TEST(NuclearNorm, Examples) {
  EXPECT_NEAR(nuclear_norm(SmallMat::identity(3)), 3.0, 1e-15);
  EXPECT_NEAR(nuclear_norm(SmallMat::diagonal({3, -4})), 7.0, 1e-15);
}

TEST(NuclearNorm, MatchesClosedForm2x2Eigen) {
  CounterRng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const SmallMat a = random_matrix(rng, 2, -5.0, 5.0);
    const SmallMat s = a.transposed() * a;
    // Eigenvalues of the symmetric 2x2 [[p, q], [q, r]].
    const double mean = 0.5 * (s(0, 0) + s(1, 1));
    const double rad = std::hypot(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
    const double expect = std::sqrt(mean + rad) + std::sqrt(std::max(0.0, mean - rad));
    EXPECT_NEAR(nuclear_norm(a), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(Polar, Examples) {
  const double c = std::cos(0.7), s = std::sin(0.7);
  const SmallMat rot(2, {c, -s, s, c});
  EXPECT_LE(oracle::max_abs_diff(polar_orthogonal(rot).orthogonal, rot), 1e-15);
  EXPECT_LE(oracle::max_abs_diff(polar_orthogonal(5.0 * SmallMat::identity(3)).orthogonal, SmallMat::identity(3)),
            1e-15);
  const PolarResult p = polar_orthogonal(SmallMat::diagonal({2, -1}));
  EXPECT_LE(oracle::max_abs_diff(p.orthogonal, SmallMat::diagonal({1, -1})), 1e-15);
  EXPECT_FALSE(p.near_singular);
}

TEST(Polar, MatchesNewtonOracleAndIsOrthogonal) {
  CounterRng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = rng.uniform_int(1, 5);
    SmallMat a = random_matrix(rng, m);
    if (std::abs(determinant(a)) < 1e-3) continue;
    const PolarResult p = polar_orthogonal(a);
    EXPECT_LE(orthogonality_residual(p.orthogonal), 1e-10);
    EXPECT_NEAR(std::abs(determinant(p.orthogonal)), 1.0, 1e-8);
    const double sv_min = oracle::singular_values(a).back();
    // Newton's conditioning degrades like 1/sigma_min.
    EXPECT_LE(oracle::max_abs_diff(p.orthogonal, oracle::newton_polar(a)), 1e-12 / std::min(1.0, sv_min));
    const double scale = rng.uniform(0.01, 100.0);
    EXPECT_LE(oracle::max_abs_diff(polar_orthogonal(scale * a).orthogonal, p.orthogonal), 1e-10);
  }
}

TEST(Polar, FlagsNearSingular) {
  EXPECT_TRUE(polar_orthogonal(SmallMat(2)).near_singular);
  EXPECT_TRUE(polar_orthogonal(SmallMat::diagonal({1.0, 1e-9})).near_singular);
  EXPECT_FALSE(polar_orthogonal(SmallMat::diagonal({1.0, 1e-7})).near_singular);
  const PolarResult z = polar_orthogonal(SmallMat(3));
  EXPECT_LE(orthogonality_residual(z.orthogonal), 1e-12);
}

TEST(SingularFunction, Examples) {
  CounterRng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const SmallMat a = random_matrix(rng, m);
    EXPECT_LE(oracle::max_abs_diff(apply_singular_function(a, [](double s) { return s; }), a), 1e-12);
    // Symmetric positive definite B: f(s) = s^2 gives B B.
    const SmallMat b = a * a.transposed() + 0.1 * SmallMat::identity(m);
    EXPECT_LE(oracle::max_abs_diff(apply_singular_function(b, [](double s) { return s * s; }), b * b),
              1e-10 * std::max(1.0, (b * b).frobenius_norm()));
  }
  EXPECT_LE(oracle::max_abs_diff(apply_singular_function(SmallMat::diagonal({2, 0.5}), [](double) { return 1.0; }),
                                 SmallMat::identity(2)),
            1e-15);
  EXPECT_THROW(apply_singular_function(SmallMat::identity(2), [](double) { return std::nan(""); }), NumericalError);
}

TEST(Convexity, TraceSqrtOfIPlusMMt) {
  CounterRng rng(9);
  auto f = [](const SmallMat& x) {
    double s = 0.0;
    for (double v : svd(x).singular_values) s += std::sqrt(1.0 + v * v);
    return s;
  };
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const SmallMat a = random_matrix(rng, m, -3.0, 3.0);
    const SmallMat b = random_matrix(rng, m, -3.0, 3.0);
    const double l = rng.uniform(0.0, 1.0);
    ASSERT_LE(f(l * a + (1.0 - l) * b), l * f(a) + (1.0 - l) * f(b) + 1e-10);
  }
}

TEST(TraceInequality, DiagonalVersusSingularValues) {
  CounterRng rng(10);
  for (int trial = 0; trial < 100000; ++trial) {
    const int m = rng.uniform_int(1, 5);
    const double alpha = 100.0 * (1.0 - rng.uniform());
    const SmallMat u = random_matrix(rng, m, -2.0, 2.0);
    double lhs = 0.0;
    for (int i = 0; i < m; ++i) lhs += std::sqrt(1.0 + alpha * u(i, i) * u(i, i));
    double rhs = 0.0;
    for (double s : svd(u).singular_values) rhs += std::sqrt(1.0 + alpha * s * s);
    ASSERT_LE(lhs, rhs + 1e-10) << "trial " << trial;
  }
}
