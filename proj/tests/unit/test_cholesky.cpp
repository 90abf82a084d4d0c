#include "spdekit/assembly.hpp"
#include "spdekit/cholesky.hpp"
#include "spdekit/error.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/ordering.hpp"
#include "spdekit/precision.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace spdekit;

namespace {

SparseSymMatrix fem_precision(Index cells) {
  const Mesh mesh = make_grid_mesh(0, 1, 0, 1, cells, cells);
  const FemMatrices fem = assemble_fem(mesh);
  return build_precision(FieldModel::stationary(mesh, 2, 3.0, 1.0), fem);
}

double dense_logdet(const DenseMatrix& d) {
  return 2.0 * Eigen::LLT<DenseMatrix>(d).matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

TEST(Ordering, AmdIsAPermutation) {
  const SparseSymMatrix q = fem_precision(12);
  std::vector<Index> p = approximate_minimum_degree(q);
  ASSERT_EQ(static_cast<Index>(p.size()), q.size());
  std::sort(p.begin(), p.end());
  for (Index i = 0; i < q.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(Ordering, AmdNeverFillsMoreThanNatural) {
  for (Index cells : {6, 10, 16, 24}) {
    const SparseSymMatrix q = fem_precision(cells);
    const auto amd = CholeskyFactor::factorize(q, Ordering::amd);
    const auto nat = CholeskyFactor::factorize(q, Ordering::natural);
    EXPECT_LE(amd.nnz(), nat.nnz()) << cells;
  }
  const Mesh sphere = make_icosphere(3);
  const SparseSymMatrix qs = build_precision(FieldModel::stationary(sphere, 2, 2.0, 1.0), assemble_fem(sphere));
  EXPECT_LE(CholeskyFactor::factorize(qs).nnz(), CholeskyFactor::factorize(qs, Ordering::natural).nnz());
}

TEST(Cholesky, IdentityGivesIdentityFactor) {
  const auto f = factorize(SparseSymMatrix::identity(5));
  EXPECT_TRUE(f.lower_dense().isIdentity());
  EXPECT_EQ(f.log_determinant(), 0.0);
}

TEST(Cholesky, Ar1LogDeterminant) {
  for (Index t : {2, 3, 7}) {
    const SparseSymMatrix q = ar1_precision(0.5, t);
    const double logdet = factorize(q).log_determinant();
    EXPECT_NEAR(logdet, std::log(q.to_dense().determinant()), 1e-13);
    // Unit-variance AR(1): det(Q) = (1 - phi^2)^-(T-1).
    EXPECT_NEAR(logdet, -(t - 1.0) * std::log(1.0 - 0.25), 1e-13);
  }
}

TEST(Cholesky, ReconstructsFemPrecision) {
  const SparseSymMatrix q = fem_precision(30);  // 961 vertices
  const auto f = factorize(q);
  const DenseMatrix l = f.lower_dense();
  const DenseMatrix qd = q.to_dense();
  DenseMatrix permuted(q.size(), q.size());
  const auto& p = f.permutation();
  for (Index i = 0; i < q.size(); ++i)
    for (Index j = 0; j < q.size(); ++j) permuted(i, j) = qd(p[i], p[j]);
  EXPECT_LT((l * l.transpose() - permuted).norm() / qd.norm(), 1e-10);
  EXPECT_TRUE((l.diagonal().array() > 0).all());
  EXPECT_NEAR(f.log_determinant(), dense_logdet(qd), 1e-8 * std::abs(dense_logdet(qd)));
}

TEST(Cholesky, NotPositiveDefiniteNamesPivot) {
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, -1.0}, {1, 0, 0.5}};
  const SparseSymMatrix q = SparseSymMatrix::from_triplets(3, t);
  try {
    factorize(q, Ordering::natural);
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.index(), 2);
    EXPECT_NE(std::string(e.what()).find("not positive definite"), std::string::npos);
  }
}

TEST(Cholesky, SolveSmallCases) {
  const Vector b = test_support::random_vector(5, 1);
  EXPECT_EQ((solve(factorize(SparseSymMatrix::identity(5)), b) - b).norm(), 0.0);
  const auto f = factorize(SparseSymMatrix::diagonal(Vector::Constant(4, 2.0)));
  EXPECT_TRUE(solve(f, Vector(Vector::Ones(4))).isApprox(Vector::Constant(4, 0.5)));
}

TEST(Cholesky, SolveMatchesDense) {
  const SparseSymMatrix q = test_support::random_spd(50, 3, 11);
  const Vector b = test_support::random_vector(50, 12);
  const Vector x = solve(factorize(q), b);
  const Vector ref = q.to_dense().llt().solve(b);
  EXPECT_LT((x - ref).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_LT((q.multiply(x) - b).lpNorm<Eigen::Infinity>() / b.lpNorm<Eigen::Infinity>(), 1e-10);
  const DenseMatrix bb = DenseMatrix::Identity(50, 3);
  EXPECT_LT((factorize(q).solve(bb) - q.to_dense().llt().solve(bb)).norm(), 1e-9);
}

TEST(Cholesky, AmdAndNaturalSolvesAgree) {
  const SparseSymMatrix q = fem_precision(15);
  const Vector b = test_support::random_vector(q.size(), 3);
  const Vector xa = factorize(q, Ordering::amd).solve(b);
  const Vector xn = factorize(q, Ordering::natural).solve(b);
  EXPECT_LT((xa - xn).lpNorm<Eigen::Infinity>() / xn.lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Cholesky, DimensionMismatchThrows) {
  const auto f = factorize(SparseSymMatrix::identity(3));
  EXPECT_THROW(f.solve(Vector(Vector::Ones(4))), InvalidArgument);
}

TEST(Sampling, IdentitySampleIsRawNormals) {
  const auto f = factorize(SparseSymMatrix::identity(6));
  const Vector x = sample_gmrf(f, 42);
  const CounterRng rng(42, streams::kGmrf);
  for (Index i = 0; i < 6; ++i) EXPECT_EQ(x[i], rng.normal(static_cast<std::uint64_t>(i)));
}

TEST(Sampling, ScaledIdentityVariance) {
  const auto f = factorize(SparseSymMatrix::diagonal(Vector::Constant(2, 4.0)));
  double s = 0.0;
  const int n = 100000;
  for (int r = 0; r < n; ++r) s += f.sample(CounterRng::derive_seed(7, r)).squaredNorm();
  EXPECT_NEAR(s / (2.0 * n), 0.25, 0.005);
}

TEST(Sampling, Ar1LagOneCorrelation) {
  const auto f = factorize(ar1_precision(0.8, 50));
  double num = 0.0, den = 0.0;
  for (int r = 0; r < 10000; ++r) {
    const Vector x = f.sample(CounterRng::derive_seed(3, r));
    num += x.head(49).dot(x.tail(49));
    den += x.squaredNorm();
  }
  EXPECT_NEAR(num / (den * 49.0 / 50.0), 0.8, 0.02);
}

TEST(Sampling, DeterministicPerSeed) {
  const auto f = factorize(fem_precision(8));
  EXPECT_EQ((f.sample(5) - f.sample(5)).norm(), 0.0);
  EXPECT_GT((f.sample(5) - f.sample(6)).norm(), 0.0);
}

TEST(SelectedInverse, Diagonal) {
  const auto s = selected_inverse(factorize(SparseSymMatrix::diagonal((Vector(2) << 2, 4).finished())));
  EXPECT_DOUBLE_EQ(s.coeff(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s.coeff(1, 1), 0.25);
}

TEST(SelectedInverse, Ar1HasUnitVariance) {
  const Vector d = selected_inverse(factorize(ar1_precision(0.5, 4))).diagonal();
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(d[i], 1.0, 1e-14);
}

TEST(SelectedInverse, MatchesDenseOnPattern) {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const SparseSymMatrix q = test_support::random_spd(40, 3, seed);
    const SparseSymMatrix s = selected_inverse(factorize(q));
    const DenseMatrix inv = q.to_dense().inverse();
    for (Index j = 0; j < s.size(); ++j)
      for (Index k = s.col_ptr()[j]; k < s.col_ptr()[j + 1]; ++k)
        EXPECT_NEAR(s.values()[k], inv(s.row_idx()[k], j), 1e-9);
    // Schur complement inequality.
    const Vector qd = q.diagonal();
    for (Index i = 0; i < q.size(); ++i) EXPECT_GE(s.coeff(i, i), 1.0 / qd[i] - 1e-15);
  }
}

TEST(SelectedInverse, CoversThePatternOfQ) {
  const SparseSymMatrix q = fem_precision(10);
  const SparseSymMatrix s = selected_inverse(factorize(q));
  for (Index j = 0; j < q.size(); ++j)
    for (Index k = q.col_ptr()[j]; k < q.col_ptr()[j + 1]; ++k) EXPECT_TRUE(s.find(q.row_idx()[k], j).has_value());
}

TEST(FactorStats, KeyValueOutput) {
  const auto f = factorize(fem_precision(5));
  const FactorStats st = f.stats();
  EXPECT_EQ(st.n, 36);
  EXPECT_EQ(st.nnz_l, f.nnz());
  EXPECT_NEAR(st.fill_ratio, static_cast<double>(st.nnz_l) / static_cast<double>(st.nnz_q), 1e-15);
  std::ostringstream os;
  write_stats(os, st);
  EXPECT_NE(os.str().find("n=36"), std::string::npos);
  EXPECT_NE(os.str().find("logdet="), std::string::npos);
}
