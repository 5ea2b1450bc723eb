#include <gtest/gtest.h>

#include <cmath>

#include "ave/linalg.hpp"
#include "ave/random.hpp"

using namespace ave;
using namespace ave::linalg;

namespace {

void expect_near(const Vector& got, const Vector& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "at " << i;
}

void expect_near(const Matrix& got, const Matrix& want, double tol) {
  ASSERT_EQ(got.rows(), want.rows());
  ASSERT_EQ(got.cols(), want.cols());
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t j = 0; j < got.cols(); ++j)
      EXPECT_NEAR(got(i, j), want(i, j), tol) << "at " << i << "," << j;
}

}  // namespace

TEST(LuSolve, IdentityReturnsRhs) {
  auto x = lu_factor_solve(Matrix::identity(2), Vector{3, 4});
  ASSERT_TRUE(x);
  expect_near(*x, {3, 4}, 1e-15);
}

TEST(LuSolve, RankOneIsSingular) {
  EXPECT_FALSE(lu_factor_solve(Matrix{{2, 2}, {2, 2}}, Vector{2, 2}));
}

TEST(LuSolve, UpperTriangular) {
  auto x = lu_factor_solve(Matrix{{2, -2}, {0, 2}}, Vector{2, 0});
  ASSERT_TRUE(x);
  expect_near(*x, {1, 0}, 1e-15);
}

TEST(LuSolve, DimensionMismatchThrows) {
  EXPECT_THROW(lu_factor_solve(Matrix::identity(2), Vector{1, 2, 3}), DimensionError);
}

TEST(LuSolve, ResidualWithinContract) {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 7);
    Matrix m = rng.matrix(n, n, -10, 10);
    Vector rhs = rng.vector(n, -10, 10);
    auto x = lu_factor_solve(m, rhs);
    ASSERT_TRUE(x);
    EXPECT_LE(norm_inf(sub(m * *x, rhs)), kSingularTol * (1 + norm_inf(rhs)));
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(det(Matrix{{1, 2}, {2, 1}}), -3.0, 1e-14);
  EXPECT_NEAR(det(Matrix::identity(3)), 1.0, 1e-15);
  EXPECT_EQ(det(Matrix{{2, 2}, {2, 2}}), 0.0);
}

TEST(Inverse, Examples) {
  auto inv = inverse(Matrix{{2, -1}, {-1, 2}});
  ASSERT_TRUE(inv);
  expect_near(*inv, Matrix{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}}, 1e-15);
  auto id = inverse(Matrix::identity(4));
  ASSERT_TRUE(id);
  EXPECT_EQ(*id, Matrix::identity(4));
  EXPECT_FALSE(inverse(Matrix{{1, 1}, {1, 1}}));
}

TEST(Inverse, RandomProductIsIdentity) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 8);
    Matrix m = rng.matrix(n, n, -10, 10);
    auto inv = inverse(m);
    if (!inv) continue;
    EXPECT_LE(norm_inf(m * *inv - Matrix::identity(n)), 1e-8);
  }
}

TEST(SymEigenvalues, Examples) {
  expect_near(sym_eigenvalues(Matrix{{2, 2}, {2, 2}}), {4, 0}, 1e-12);
  expect_near(sym_eigenvalues(Matrix::identity(3)), {1, 1, 1}, 1e-15);
  expect_near(sym_eigenvalues(Matrix{{0, 1}, {1, 0}}), {1, -1}, 1e-12);
}

TEST(SymEigenvalues, RejectsNonSymmetric) {
  EXPECT_THROW(sym_eigenvalues(Matrix{{0, 1}, {0, 0}}), std::invalid_argument);
}

TEST(SymEigenvalues, TraceAndDeterminant) {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 8);
    Matrix b = rng.matrix(n, n, -3, 3);
    Matrix m = b + b.transpose();
    Vector ev = sym_eigenvalues(m);
    double tr = 0, sum = 0, prod = 1;
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    for (double l : ev) {
      sum += l;
      prod *= l;
    }
    EXPECT_NEAR(sum, tr, 1e-9);
    const double d = det(m);
    EXPECT_LE(std::abs(prod - d), 1e-7 * std::max(1.0, std::abs(d)));
    for (std::size_t i = 1; i < n; ++i) EXPECT_GE(ev[i - 1], ev[i]);
  }
}

TEST(Signature, Examples) {
  const Matrix a{{1, 2}, {2, 1}};
  const Matrix id = Matrix::identity(2);
  const auto p = signature(a + id, 1e-9);
  EXPECT_EQ(p.n_pos, 1u);
  EXPECT_EQ(p.n_neg, 0u);
  EXPECT_EQ(p.n_zero, 1u);
  const auto m = signature(a - id, 1e-9);
  EXPECT_EQ(m.n_pos, 1u);
  EXPECT_EQ(m.n_neg, 1u);
  EXPECT_EQ(m.n_zero, 0u);
  const auto neg = signature(-Matrix::identity(3), 1e-9);
  EXPECT_EQ(neg.n_neg, 3u);
  EXPECT_EQ(neg.n_pos + neg.n_zero, 0u);
}

TEST(Signature, CountsSumToDimension) {
  Rng rng(9);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
    Matrix b = rng.matrix(n, n, -2, 2);
    Matrix s = b + b.transpose();
    for (double d : {1.0, -1.0}) {
      const auto in = signature(s + Matrix::identity(n) * d, 1e-9);
      EXPECT_EQ(in.n_pos + in.n_neg + in.n_zero, n);
    }
  }
}

TEST(SpectralRadiusNonneg, Examples) {
  EXPECT_NEAR(spectral_radius_nonneg(Matrix::ones(2, 2) * 0.25), 0.5, 1e-10);
  EXPECT_EQ(spectral_radius_nonneg(Matrix(3, 3, 0.0)), 0.0);
  EXPECT_NEAR(spectral_radius_nonneg(abs(Matrix{{0, -0.3}, {0.3, 0}})), 0.3, 1e-10);
}

TEST(SpectralRadiusNonneg, RejectsNegativeEntries) {
  EXPECT_THROW(spectral_radius_nonneg(Matrix{{1, -1}, {0, 1}}), std::invalid_argument);
}

TEST(SpectralRadiusNonneg, BetweenMaxDiagonalAndMaxRowSum) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 7);
    Matrix m = rng.matrix(n, n, 0, 2);
    if (t % 3 == 0)  // reducible: zero out the lower triangle
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) m(i, j) = 0;
    const double rho = spectral_radius_nonneg(m);
    double max_diag = 0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
    EXPECT_LE(rho, norm_inf(m) + 1e-9);
    EXPECT_GE(rho, max_diag - 1e-9);
  }
}

TEST(Perron, VectorIsPositiveEigenvector) {
  const Matrix m{{1, 2}, {3, 0.5}};
  const auto p = perron(m);
  const Vector mv = m * p.vector;
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_GT(p.vector[i], 0);
    EXPECT_NEAR(mv[i], p.root * p.vector[i], 1e-8);
  }
}

TEST(SpectralRadiusGeneral, Examples) {
  EXPECT_NEAR(spectral_radius_general(Matrix::diagonal(Vector{0.5, -0.25})), 0.5, 1e-6);
  EXPECT_NEAR(spectral_radius_general(Matrix{{0, -1}, {1, 0}}), 1.0, 1e-6);
  EXPECT_NEAR(spectral_radius_general(Matrix::identity(3) * 0.9), 0.9, 1e-6);
  EXPECT_NEAR(spectral_radius_general(Matrix{{0, 1}, {0, 0}}), 0.0, 1e-6);
}

TEST(SpectralRadiusGeneral, BoundedBySpectralNorm) {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
    Matrix m = rng.matrix(n, n, -2, 2);
    EXPECT_LE(spectral_radius_general(m), spectral_norm(m) + 1e-6);
  }
}

TEST(SpectralRadiusGeneral, AgreesWithSymmetricSpectrum) {
  Rng rng(29);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
    Matrix b = rng.matrix(n, n, -1, 1);
    Matrix s = b + b.transpose();
    const Vector ev = sym_eigenvalues(s);
    const double want = std::max(std::abs(ev.front()), std::abs(ev.back()));
    EXPECT_NEAR(spectral_radius_general(s), want, 1e-6);
  }
}

TEST(SingularValues, Examples) {
  EXPECT_NEAR(min_singular_value(Matrix::identity(2) * 2.0), 2.0, 1e-12);
  EXPECT_NEAR(min_singular_value(Matrix{{1, 1}, {1, 1}}), 0.0, 1e-7);
  EXPECT_NEAR(min_singular_value(Matrix{{3, 0}, {0, 0.5}}), 0.5, 1e-12);
  EXPECT_NEAR(spectral_norm(Matrix::identity(3) * 0.4), 0.4, 1e-12);
  EXPECT_NEAR(spectral_norm(Matrix{{0, 1}, {0, 0}}), 1.0, 1e-12);
  EXPECT_NEAR(spectral_norm(Matrix::ones(2, 2)), 2.0, 1e-12);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Matrix{{1, 2}, {2, 4}}), 1u);
  EXPECT_EQ(rank(Matrix::identity(3)), 3u);
  EXPECT_EQ(rank(Matrix(2, 3, 0.0)), 0u);
}

TEST(MatrixPredicates, ZMatrixAndNonnegative) {
  EXPECT_TRUE(is_z_matrix(Matrix{{5, -1}, {0, -2}}));
  EXPECT_FALSE(is_z_matrix(Matrix{{0, 1}, {0, 0}}));
  EXPECT_TRUE(nonnegative(Matrix{{0, 1}, {2, 0}}));
  EXPECT_FALSE(nonnegative(Vector{1, -1e-3}));
  EXPECT_TRUE(is_symmetric(Matrix{{1, 2}, {2, 1}}));
}

TEST(Rng, ReproducibleAcrossInstances) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.unit(), b.unit());
  // std::mt19937_64 is fully specified: the 10000th output for the default
  // seed is fixed by the standard.
  std::mt19937_64 e;
  e.discard(9999);
  EXPECT_EQ(e(), 9981545732273789042ull);
}

TEST(Rng, UnitInterval) {
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const auto k = r.integer(-2, 2);
    EXPECT_GE(k, -2);
    EXPECT_LE(k, 2);
  }
}
