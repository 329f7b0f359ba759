#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/linalg.hpp"

using namespace sparsalloc;
using sparsalloc::test::householder;
using sparsalloc::test::random_matrix;
using sparsalloc::test::rel_diff;

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

// Smallest non-zero singular value from the eigenvalues of the smaller Gram
// matrix, using Eigen's self-adjoint solver.
double gram_sigma_min(const DenseMatrix& m) {
  Eigen::MatrixXd e = to_eigen(m);
  Eigen::MatrixXd g = e.rows() >= e.cols() ? Eigen::MatrixXd(e.transpose() * e) : Eigen::MatrixXd(e * e.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  auto ev = solver.eigenvalues();
  double top = std::sqrt(std::max(ev.maxCoeff(), 0.0));
  double best = top;
  for (int i = 0; i < ev.size(); ++i) {
    double s = std::sqrt(std::max(ev(i), 0.0));
    if (s > 1e-7 * top) best = std::min(best, s);
  }
  return best;
}

}  // namespace

TEST(DenseMatrix, RejectsBadEntries) {
  EXPECT_THROW(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(DenseMatrix(1, 2, std::vector<double>{1, std::nan("")}), DomainError);
  EXPECT_THROW(DenseMatrix(1, 1, std::vector<double>{INFINITY}), DomainError);
}

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  auto b = random_matrix(2, 5, 11);
  EXPECT_EQ(matmul(DenseMatrix::identity(2), b), b);
}

TEST(Matmul, HandExample) {
  auto c = matmul(DenseMatrix::from_rows({{1, 2}, {3, 4}}), DenseMatrix::from_rows({{1}, {1}}));
  EXPECT_EQ(c, DenseMatrix::from_rows({{3}, {7}}));
}

TEST(Matmul, MatchesTripleLoop) {
  auto a = random_matrix(5, 4, 1);
  auto b = random_matrix(4, 3, 2);
  auto c = matmul(a, b);
  ASSERT_EQ(c.rows(), 5u);
  ASSERT_EQ(c.cols(), 3u);
  EXPECT_LE(test::max_abs_diff(c, test::naive_product(a, b)), 1e-12);
}

TEST(Matmul, ShapeMismatchThrows) {
  EXPECT_THROW(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), ShapeError);
}

TEST(Matmul, Associativity) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    auto a = random_matrix(3 + seed % 5, 4, seed * 3 + 1);
    auto b = random_matrix(4, 6, seed * 3 + 2);
    auto c = random_matrix(6, 2 + seed % 3, seed * 3 + 3);
    double gap = std::sqrt(frob_dist_sq(matmul(matmul(a, b), c), matmul(a, matmul(b, c))));
    double scale = std::sqrt(frob_norm_sq(a) * frob_norm_sq(b) * frob_norm_sq(c));
    EXPECT_LE(gap, 1e-9 * (1.0 + scale));
  }
}

TEST(FrobNorm, SmallCases) {
  EXPECT_EQ(frob_norm_sq(DenseMatrix(3, 4)), 0.0);
  EXPECT_EQ(frob_norm_sq(DenseMatrix::identity(3)), 3.0);
}

TEST(FrobNorm, MatchesScalarLoopAndTrace) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    auto m = random_matrix(6, 6, seed);
    double f = frob_norm_sq(m);
    EXPECT_LE(rel_diff(f, test::naive_sum_sq(m)), 1e-12);
    auto g = matmul(transpose(m), m);
    double tr = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) tr += g(i, i);
    EXPECT_LE(rel_diff(f, tr), 1e-10);
  }
}

TEST(FrobNorm, DistanceMatchesSubtract) {
  auto a = random_matrix(4, 7, 3);
  auto b = random_matrix(4, 7, 4);
  EXPECT_LE(rel_diff(frob_dist_sq(a, b), frob_norm_sq(subtract(a, b))), 1e-12);
}

TEST(SigmaMin, IdentityAndDiagonal) {
  EXPECT_NEAR(sigma_min(DenseMatrix::identity(4)), 1.0, 1e-15);
  std::vector<double> d{3, 2, 1};
  EXPECT_NEAR(sigma_min(DenseMatrix::diagonal(d)), 1.0, 1e-15);
  std::vector<double> neg{-5, 0.5, 2};
  EXPECT_NEAR(sigma_min(DenseMatrix::diagonal(neg)), 0.5, 1e-15);
}

TEST(SigmaMin, ZeroMatrixIsDomainError) {
  EXPECT_THROW(sigma_min(DenseMatrix(3, 3)), DomainError);
}

TEST(SigmaMin, MatchesGramEigenvalues) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    auto m = random_matrix(8, 5, 100 + seed);
    EXPECT_LE(rel_diff(sigma_min(m), gram_sigma_min(m)), 1e-8) << "seed " << seed;
    auto wide = random_matrix(3, 9, 200 + seed);
    EXPECT_LE(rel_diff(sigma_min(wide), gram_sigma_min(wide)), 1e-8) << "seed " << seed;
  }
}

TEST(SigmaMin, AllSingularValuesMatchEigenSvd) {
  auto m = random_matrix(12, 7, 5);
  auto ours = singular_values(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  auto ref = svd.singularValues();
  ASSERT_EQ(ours.size(), static_cast<std::size_t>(ref.size()));
  for (std::size_t i = 0; i < ours.size(); ++i) EXPECT_LE(rel_diff(ours[i], ref(static_cast<int>(i))), 1e-12);
}

TEST(SigmaMin, SkipsNumericalZeros) {
  // Rank 2: third column is the sum of the first two.
  auto m = DenseMatrix::from_rows({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}, {2, -1, 1}});
  EXPECT_EQ(numerical_rank(m), 2u);
  EXPECT_LE(rel_diff(sigma_min(m), gram_sigma_min(m)), 1e-8);
  // A zero row does not change the smallest non-zero value.
  auto z = DenseMatrix::from_rows({{2, 0}, {0, 0}});
  EXPECT_NEAR(sigma_min(z), 2.0, 1e-15);
}

TEST(SigmaMin, OrthogonalInvariance) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    auto m = random_matrix(6, 4, 300 + seed);
    double base = sigma_min(m);
    EXPECT_LE(rel_diff(sigma_min(matmul(householder(6, 400 + seed), m)), base), 1e-8);
    EXPECT_LE(rel_diff(sigma_min(matmul(m, householder(4, 500 + seed))), base), 1e-8);
  }
}

TEST(Lemma1Gap, IdentityIsTight) {
  auto b = random_matrix(3, 5, 8);
  auto g = lemma1_gap(DenseMatrix::identity(3), b);
  EXPECT_DOUBLE_EQ(g.lhs, g.rhs);
}

TEST(Lemma1Gap, UniformScaling) {
  auto b = random_matrix(2, 4, 9);
  auto a = DenseMatrix::from_rows({{2, 0}, {0, 2}});
  auto g = lemma1_gap(a, b);
  EXPECT_LE(rel_diff(g.lhs, 4.0 * frob_norm_sq(b)), 1e-14);
  EXPECT_LE(rel_diff(g.rhs, 4.0 * frob_norm_sq(b)), 1e-14);
}

TEST(Lemma1Gap, HoldsForFullColumnRank) {
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    std::size_t n = 1 + seed % 6;
    auto a = random_matrix(n + seed % 4, n, 600 + seed);
    auto b = random_matrix(n, 1 + seed % 5, 900 + seed);
    auto g = lemma1_gap(a, b);
    EXPECT_GE(g.lhs, g.rhs - 1e-9) << "seed " << seed;
  }
}

TEST(Lemma1Gap, ShapeMismatch) {
  EXPECT_THROW(lemma1_gap(DenseMatrix::identity(2), DenseMatrix(3, 1, 1.0)), ShapeError);
}

TEST(ColumnBlock, KeepsRequestedColumns) {
  auto m = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(column_block(m, 1, 2), DenseMatrix::from_rows({{2, 3}, {5, 6}}));
  EXPECT_THROW(column_block(m, 2, 2), ShapeError);
}
