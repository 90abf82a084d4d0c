#include "spdekit/error.hpp"
#include "spdekit/sparse.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace spdekit;

TEST(SparseMatrix, TripletsSumDuplicatesAndDropZeros) {
  const std::vector<Triplet> t{{0, 1, 2.0}, {0, 1, 3.0}, {1, 0, 1.0}, {1, 0, -1.0}, {2, 2, 4.0}};
  const SparseMatrix m = SparseMatrix::from_triplets(3, 3, t);
  EXPECT_EQ(m.nnz(), 2);
  EXPECT_DOUBLE_EQ(m.coeff(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(m.coeff(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.coeff(2, 2), 4.0);
}

TEST(SparseMatrix, ProductMatchesDense) {
  const SparseMatrix a = test_support::random_spd(20, 3, 1).to_general();
  const SparseMatrix b = test_support::random_spd(20, 2, 2).to_general();
  const DenseMatrix expect = a.to_dense() * b.to_dense();
  EXPECT_LT(((a * b).to_dense() - expect).norm(), 1e-12 * expect.norm());
  EXPECT_LT(((a + b).to_dense() - a.to_dense() - b.to_dense()).norm(), 1e-12);
  EXPECT_LT((a.transpose().to_dense() - a.to_dense().transpose()).norm(), 0.0 + 1e-15);
}

TEST(SparseMatrix, MultiplyAndScaled) {
  const SparseMatrix a = SparseMatrix::from_dense((DenseMatrix(2, 3) << 1, 0, 2, 0, 3, 0).finished());
  const Vector x = (Vector(3) << 1, 2, 3).finished();
  EXPECT_TRUE(a.multiply(x).isApprox((Vector(2) << 7, 6).finished()));
  EXPECT_TRUE(a.multiply_transpose(Vector::Ones(2)).isApprox((Vector(3) << 1, 3, 2).finished()));
  const SparseMatrix s = a.scaled((Vector(2) << 2, 3).finished(), Vector());
  EXPECT_DOUBLE_EQ(s.coeff(1, 1), 9.0);
}

TEST(SparseSymMatrix, StoresLowerTriangleWithDiagonalFirst) {
  const std::vector<Triplet> t{{0, 2, 1.0}, {2, 2, 5.0}, {1, 1, 3.0}, {0, 0, 2.0}, {2, 1, -1.0}};
  const SparseSymMatrix q = SparseSymMatrix::from_triplets(3, t);
  EXPECT_EQ(q.nnz(), 5);
  EXPECT_DOUBLE_EQ(q.coeff(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(q.coeff(2, 0), 1.0);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(q.row_idx()[q.col_ptr()[j]], j);
  const DenseMatrix d = q.to_dense();
  EXPECT_TRUE(d.isApprox(d.transpose()));
}

TEST(SparseSymMatrix, FromGeneralSymmetrises) {
  const DenseMatrix a = (DenseMatrix(2, 2) << 1, 2, 4, 1).finished();
  const SparseSymMatrix q = SparseSymMatrix::from_general(SparseMatrix::from_dense(a));
  EXPECT_DOUBLE_EQ(q.coeff(0, 1), 3.0);
}

TEST(SparseSymMatrix, QuadraticFormAndMultiply) {
  const SparseSymMatrix q = test_support::random_spd(30, 3, 3);
  const Vector x = test_support::random_vector(30, 4);
  const DenseMatrix d = q.to_dense();
  EXPECT_NEAR(q.quadratic_form(x), x.dot(d * x), 1e-10);
  EXPECT_LT((q.multiply(x) - d * x).norm(), 1e-12);
  EXPECT_LT((q.scaled(x).to_dense() - x.asDiagonal() * d * x.asDiagonal()).norm(), 1e-12);
}

TEST(SparseSymMatrix, Kronecker) {
  const SparseSymMatrix a = test_support::random_spd(3, 1, 5);
  const SparseSymMatrix b = test_support::random_spd(4, 2, 6);
  const DenseMatrix da = a.to_dense();
  const DenseMatrix db = b.to_dense();
  const DenseMatrix k = kronecker(a, b).to_dense();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) EXPECT_LT((k.block(4 * i, 4 * j, 4, 4) - da(i, j) * db).norm(), 1e-14);
}

TEST(MatrixMarket, RoundTrip) {
  const SparseSymMatrix q = test_support::random_spd(25, 3, 7);
  std::stringstream ss;
  write_matrix_market(ss, q);
  EXPECT_NE(ss.str().find("symmetric"), std::string::npos);
  const SparseSymMatrix back = read_matrix_market_symmetric(ss);
  EXPECT_EQ((back.to_dense() - q.to_dense()).norm(), 0.0);

  const SparseMatrix g = test_support::random_spd(7, 2, 8).to_general();
  std::stringstream gs;
  write_matrix_market(gs, g);
  EXPECT_EQ((read_matrix_market_general(gs).to_dense() - g.to_dense()).norm(), 0.0);
}

TEST(MatrixMarket, RejectsGarbage) {
  std::stringstream ss("not a matrix\n");
  EXPECT_THROW(read_matrix_market_symmetric(ss), Error);
}
