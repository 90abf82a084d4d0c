#include "spdekit/assembly.hpp"
#include "spdekit/cholesky.hpp"
#include "spdekit/error.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/oracles.hpp"
#include "spdekit/precision.hpp"
#include "spdekit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace spdekit;

namespace {

Index nearest_vertex(const Mesh& m, double x, double y) {
  Index best = 0;
  double bd = 1e300;
  for (Index i = 0; i < m.num_vertices(); ++i) {
    const double d = std::hypot(m.vertex(i)[0] - x, m.vertex(i)[1] - y);
    if (d < bd) bd = d, best = i;
  }
  return best;
}

Vector covariance_column(const CholeskyFactor& f, Index j) {
  Vector e = Vector::Zero(f.size());
  e[j] = 1.0;
  return f.solve(e);
}

}  // namespace

TEST(Precision, AlphaTwoMatchesIteratedForm) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 6, 6);
  const FemMatrices fem = assemble_fem(m);
  const double kappa = 2.5, tau = 0.7;
  const SparseSymMatrix q = build_precision(FieldModel::stationary(m, 2, kappa, tau), fem);
  const DenseMatrix k = kappa * kappa * DenseMatrix(fem.c_lumped.asDiagonal()) + fem.g.to_dense();
  const DenseMatrix expect = tau * tau * k * fem.c_lumped.cwiseInverse().asDiagonal() * k;
  EXPECT_LT((q.to_dense() - expect).norm(), 1e-12 * expect.norm());
  EXPECT_NO_THROW(factorize(q));
}

TEST(Precision, SymmetricForAllAlphaWithVaryingParameters) {
  const Mesh m = make_icosphere(1);
  const FemMatrices fem = assemble_fem(m);
  FieldModel model = FieldModel::stationary(m, 3, 1.0, 1.0);
  for (Index i = 0; i < m.num_vertices(); ++i) {
    model.kappa[i] = 1.0 + 0.5 * m.vertex(i)[2];
    model.tau[i] = 1.0 + 0.3 * m.vertex(i)[0];
  }
  const DenseMatrix q = build_precision(model, fem).to_dense();
  EXPECT_EQ((q - q.transpose()).norm(), 0.0);
  EXPECT_NO_THROW(factorize(build_precision(model, fem)));
}

TEST(Precision, LargeKappaLimit) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 5, 5);
  const FemMatrices fem = assemble_fem(m);
  const double kappa = 1e4, tau = 2;
  const Vector d = build_precision(FieldModel::stationary(m, 2, kappa, tau), fem).diagonal();
  const Vector expect = tau * tau * std::pow(kappa, 4) * fem.c_lumped;
  EXPECT_LT(((d - expect).array() / expect.array()).abs().maxCoeff(), 1e-5);
}

TEST(Precision, Errors) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 2, 2);
  const FemMatrices fem = assemble_fem(m);
  EXPECT_THROW(build_precision(FieldModel::stationary(m, 5, 1, 1), fem), InvalidArgument);
  EXPECT_THROW(build_precision(FieldModel::stationary(m, 1.5, 1, 1), fem), InvalidArgument);
  EXPECT_THROW(FieldModel::stationary(m, 2, 0.0, 1), InvalidArgument);
  EXPECT_THROW(FieldModel::stationary(m, 2, 1.0, -1), InvalidArgument);
  const Mesh other = make_grid_mesh(0, 1, 0, 1, 3, 3);
  EXPECT_THROW(build_precision(FieldModel::stationary(other, 2, 1, 1), fem), InvalidArgument);
}

TEST(Precision, GreensFunctionIdentity) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 14, 14);
  const SparseSymMatrix q = build_precision(FieldModel::stationary(m, 2, 4, 1), assemble_fem(m));
  const DenseMatrix qd = q.to_dense();
  const DenseMatrix sigma = qd.inverse();
  EXPECT_LT((qd * sigma - DenseMatrix::Identity(q.size(), q.size())).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Precision, SparsityIsGraphPower) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 7, 7);
  const FemMatrices fem = assemble_fem(m);
  const DenseMatrix adj = (fem.g.to_dense().array() != 0.0).cast<double>().matrix();
  DenseMatrix reach = DenseMatrix::Identity(m.num_vertices(), m.num_vertices());
  Index prev = 0;
  for (int alpha = 1; alpha <= 4; ++alpha) {
    reach = ((reach * adj).array() != 0.0).cast<double>().matrix();
    const SparseSymMatrix q = build_precision(FieldModel::stationary(m, alpha, 2, 1), fem);
    EXPECT_GE(q.nnz(), prev);
    prev = q.nnz();
    const DenseMatrix qd = q.to_dense();
    for (Index i = 0; i < qd.rows(); ++i)
      for (Index j = 0; j < qd.cols(); ++j) EXPECT_EQ(qd(i, j) != 0.0, reach(i, j) != 0.0);
  }
}

TEST(Precision, StationaryVarianceFarFromBoundary) {
  const double kappa = std::sqrt(8.0), tau = 1.0;
  const Mesh m = make_grid_mesh(-2, 3, -2, 3, 100, 100);
  const FieldModel model = FieldModel::stationary(m, 2, kappa, tau);
  const auto f = factorize(build_precision(model, assemble_fem(m)));
  const Index c = nearest_vertex(m, 0.5, 0.5);
  const double var = covariance_column(f, c)[c];
  EXPECT_NEAR(var / oracles::matern_sigma2(kappa, tau, 2, 2), 1.0, 0.05);
  EXPECT_NEAR(model.practical_range()[0], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(model.nu(), 1.0);
}

TEST(Precision, IntervalMatchesFoldedMatern) {
  const double kappa = 6.0, tau = 1.0, length = 2.0;
  const Mesh m = make_interval_mesh(0, length, 800);
  const auto f = factorize(build_precision(FieldModel::stationary(m, 2, kappa, tau), assemble_fem(m)));
  const auto p = oracles::MaternParams::from_spde(kappa, tau, 2, 1);
  for (Index j : {0, 100, 400}) {
    const Vector col = covariance_column(f, j);
    for (Index i = 0; i <= 800; i += 50) {
      const double ref = oracles::folded_matern_1d(m.vertex(i)[0], m.vertex(j)[0], p, length).value;
      if (ref > 0.05 * p.sigma2) EXPECT_NEAR(col[i] / ref, 1.0, 0.05) << i << "," << j;
    }
  }
}

TEST(Barrier, KappaField) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 4, 4);
  const double k = std::sqrt(8.0) / 0.5;
  const Vector none = make_barrier_kappa(m, std::vector<bool>(m.num_simplices(), false), 0.5);
  EXPECT_TRUE((none.array() == k).all());
  const Vector all = make_barrier_kappa(m, std::vector<bool>(m.num_simplices(), true), 0.5);
  EXPECT_TRUE((all.array() == 20 * k).all());
  EXPECT_THROW(make_barrier_kappa(m, std::vector<bool>(3, false), 0.5), InvalidArgument);
  EXPECT_THROW(make_barrier_kappa(m, std::vector<bool>(m.num_simplices(), false), 0.5, 5.0), InvalidArgument);
}

TEST(Barrier, SuppressesCorrelationAcrossStrip) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 60, 60);
  std::vector<bool> mask(m.num_simplices());
  for (Index s = 0; s < m.num_simplices(); ++s) mask[s] = std::abs(m.centroid(s)[0] - 0.5) < 0.06;
  FieldModel model = FieldModel::stationary(m, 2, 1.0, 1.0);
  model.kappa = make_barrier_kappa(m, mask, 0.5);
  model.barrier_mask = mask;
  const auto f = factorize(build_precision(model, assemble_fem(m)));
  auto corr = [&](Index a, Index b) {
    const Vector ca = covariance_column(f, a), cb = covariance_column(f, b);
    return ca[b] / std::sqrt(ca[a] * cb[b]);
  };
  const double across = corr(nearest_vertex(m, 0.4, 0.5), nearest_vertex(m, 0.6, 0.5));
  const double same = corr(nearest_vertex(m, 0.2, 0.5), nearest_vertex(m, 0.4, 0.5));
  EXPECT_LT(across, 0.25 * same);
}

TEST(Ar1, Values) {
  EXPECT_TRUE(ar1_precision(0.0, 3).to_dense().isIdentity());
  const DenseMatrix inv = ar1_precision(0.5, 4).to_dense().inverse();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(inv(i, j), std::pow(0.5, std::abs(i - j)), 1e-12);
  const DenseMatrix two = ar1_precision(0.9, 2).to_dense();
  EXPECT_LT((two - (DenseMatrix(2, 2) << 1, -0.9, -0.9, 1).finished() / 0.19).norm(), 1e-12);
  EXPECT_THROW(ar1_precision(1.0, 3), InvalidArgument);
  EXPECT_THROW(ar1_precision(0.5, 1), InvalidArgument);
}

TEST(SpaceTime, Structure) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 4, 4);
  const FemMatrices fem = assemble_fem(m);
  const FieldModel s = FieldModel::stationary(m, 2, 3, 1);
  EXPECT_THROW(build_spacetime_precision({s, 1, 0.5}, fem), InvalidArgument);
  const DenseMatrix qs = build_precision(s, fem).to_dense();
  const DenseMatrix q = build_spacetime_precision({s, 2, 0.0}, fem).to_dense();
  const Index n = m.num_vertices();
  EXPECT_EQ((q.block(0, 0, n, n) - qs).norm(), 0.0);
  EXPECT_EQ((q.block(n, n, n, n) - qs).norm(), 0.0);
  EXPECT_EQ(q.block(n, 0, n, n).norm(), 0.0);
  EXPECT_THROW(build_spacetime_precision({s, 1000, 0.5}, fem, 1000), InvalidArgument);
  const SpaceTimeModel st = SpaceTimeModel::from_damping(s, 3, 0.5, 2.0);
  EXPECT_NEAR(st.phi, std::exp(-1.0), 1e-15);
}

TEST(SpaceTime, SliceCovarianceIsSpatial) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 8, 8);
  const FemMatrices fem = assemble_fem(m);
  const FieldModel s = FieldModel::stationary(m, 2, 3, 1);
  const DenseMatrix qs_inv = build_precision(s, fem).to_dense().inverse();
  const Index n = m.num_vertices();
  for (double phi : {0.3, 0.9}) {
    const auto f = factorize(build_spacetime_precision({s, 4, phi}, fem));
    for (Index t = 0; t < 4; ++t)
      for (Index j = 0; j < n; j += 13) {
        const Vector col = covariance_column(f, t * n + j);
        EXPECT_LT((col.segment(t * n, n) - qs_inv.col(j)).cwiseAbs().maxCoeff(), 1e-9);
      }
  }
}

TEST(SpaceTime, TemporalAutocorrelation) {
  const Mesh m = make_grid_mesh(0, 1, 0, 1, 3, 3);
  const FemMatrices fem = assemble_fem(m);
  const Index n = m.num_vertices(), steps = 30;
  const auto f = factorize(build_spacetime_precision({FieldModel::stationary(m, 2, 3, 1), steps, 0.7}, fem));
  const Index node = 4;
  const int reps = 4000;
  Vector acf = Vector::Zero(4);
  double var = 0.0;
  for (int r = 0; r < reps; ++r) {
    const Vector x = f.sample(CounterRng::derive_seed(11, r));
    for (Index t = 0; t < steps; ++t) var += x[t * n + node] * x[t * n + node];
    for (int lag = 1; lag <= 3; ++lag)
      for (Index t = 0; t + lag < steps; ++t) acf[lag] += x[t * n + node] * x[(t + lag) * n + node] / (steps - lag);
  }
  var /= reps * steps;
  for (int lag = 1; lag <= 3; ++lag) EXPECT_NEAR(acf[lag] / reps / var, std::pow(0.7, lag), 0.03) << lag;
}
