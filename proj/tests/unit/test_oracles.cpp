#include "spdekit/error.hpp"
#include "spdekit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace spdekit;
using namespace spdekit::oracles;

TEST(Bessel, HalfIntegerClosedForms) {
  const double pi = std::numbers::pi;
  for (double x = 1e-3; x <= 30.0; x *= 1.3) {
    const double base = std::sqrt(pi / (2 * x)) * std::exp(-x);
    EXPECT_NEAR(bessel_k(0.5, x) / base, 1.0, 1e-10) << x;
    EXPECT_NEAR(bessel_k(1.5, x) / (base * (1 + 1 / x)), 1.0, 1e-10) << x;
    EXPECT_NEAR(bessel_k(2.5, x) / (base * (1 + 3 / x + 3 / (x * x))), 1.0, 1e-10) << x;
  }
  EXPECT_THROW(bessel_k(1.0, 0.0), InvalidArgument);
}

TEST(Matern, ZeroDistanceIsVariance) {
  EXPECT_EQ(matern_cov(0.0, {2.0, 1.3, 0.7}), 0.7);
}

TEST(Matern, ExponentialAtHalf) {
  const MaternParams p{1.7, 0.5, 2.0};
  for (double r : {0.1, 1.0, 5.0}) EXPECT_NEAR(matern_cov(r, p), 2.0 * std::exp(-1.7 * r), 1e-12);
}

TEST(Matern, ThreeHalves) {
  EXPECT_NEAR(matern_cov(1.0, {1.0, 1.5, 1.0}), 2.0 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(matern_cov(1.0, {1.0, 1.5, 1.0}), 0.73576, 1e-5);
}

TEST(Matern, PositiveDecreasingAndScaleCollapse) {
  for (double nu : {0.3, 0.5, 1.0, 2.2}) {
    double prev = 1.0;
    for (double r = 0.01; r < 10; r += 0.05) {
      const double c = matern_cov(r, {1.0, nu, 1.0});
      EXPECT_GT(c, 0.0);
      EXPECT_LT(c, prev);
      prev = c;
      for (double k : {0.5, 3.0})
        EXPECT_NEAR(matern_cov(r / k, {k, nu, 2.5}) / 2.5, c, 1e-12 * std::max(c, 1e-300));
    }
  }
}

TEST(Matern, Sigma2Formula) {
  EXPECT_NEAR(matern_sigma2(1, 1, 2, 2), 1.0 / (4 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(matern_sigma2(1, 1, 2, 2) / matern_sigma2(1, 2, 2, 2), 4.0, 1e-14);
  EXPECT_NEAR(matern_sigma2(1, 1, 1, 1), 0.5, 1e-15);
  EXPECT_THROW(matern_sigma2(1, 1, 1, 2), InvalidArgument);
  const MaternParams p = MaternParams::from_spde(2.0, 0.5, 2.0, 2);
  EXPECT_DOUBLE_EQ(p.nu, 1.0);
}

TEST(Spectral, ValueAndMonotone) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(spectral_density_rd(0, 2, 3, 2, 2), 1.0 / (9 * 4 * pi * pi * 16), 1e-15);
  double prev = spectral_density_rd(0, 1, 1, 1.5, 2);
  for (double k = 0.1; k < 20; k += 0.1) {
    const double s = spectral_density_rd(k, 1, 1, 1.5, 2);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Spectral, FourierInversionMatchesMatern1d) {
  // d = 1, alpha = 1: nu = 1/2.
  const double kappa = 1.3, tau = 0.8;
  const MaternParams p = MaternParams::from_spde(kappa, tau, 1.0, 1);
  for (double r : {0.0, 0.5, 1.5}) {
    // C(r) = int S(k) cos(k r) dk over the real line, by the midpoint rule plus an analytic tail.
    const double kmax = 4000.0;
    const int n = 4'000'000;
    const double h = kmax / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = (i + 0.5) * h;
      s += spectral_density_rd(k, kappa, tau, 1.0, 1) * std::cos(k * r);
    }
    s *= 2 * h;
    if (r == 0.0) s += 2.0 / (tau * tau * 2 * std::numbers::pi * kmax);
    EXPECT_NEAR(s, matern_cov(r, p), 1e-4) << r;
  }
}

TEST(Legendre, RecurrenceMatchesExplicit) {
  const Vector p = legendre_values(0.3, 5);
  EXPECT_NEAR(p[2], -0.365, 1e-15);
  EXPECT_NEAR(p[3], 0.5 * (5 * 0.027 - 3 * 0.3), 1e-15);
  const Vector q = legendre_values(1.0, 10000);
  EXPECT_NEAR(q[10000], 1.0, 1e-10);
}

TEST(SphereSeries, ConvergesAndBoundsTail) {
  const SeriesValue a = sphere_cov_series(0.0, 1, 1, 2, 200);
  const SeriesValue b = sphere_cov_series(0.0, 1, 1, 2, 5000);
  EXPECT_GE(a.tail_bound, b.value - a.value);
  EXPECT_GT(b.value - a.value, 0.0);
  EXPECT_LT(b.tail_bound, a.tail_bound);
  EXPECT_THROW(sphere_cov_series(0.0, 1, 1, 1.0, 200), InvalidArgument);
  EXPECT_THROW(sphere_cov_series(0.0, 1, 1, 2.0, 5), InvalidArgument);
}

TEST(SphereSeries, SmallAnglesMatchPlanarMatern) {
  // Short range on the unit sphere: kappa = 20 gives range sqrt(8)/20 ~ 0.14.
  const double kappa = 20, tau = 1, alpha = 2;
  const MaternParams p = MaternParams::from_spde(kappa, tau, alpha, 2);
  const double range = std::sqrt(8.0) / kappa;
  for (double frac : {0.0, 0.05, 0.1}) {
    const double angle = frac * range;
    const double s = sphere_cov_series(angle, kappa, tau, alpha, 4000).value;
    EXPECT_NEAR(s / matern_cov(2 * std::sin(angle / 2), p), 1.0, 0.02) << frac;
  }
}

TEST(Folded, SymmetryAndLimit) {
  const MaternParams p{3.0, 1.5, 1.0};
  const double l = 2.0;
  const double a = folded_matern_1d(0.3, 1.1, p, l).value;
  EXPECT_NEAR(a, folded_matern_1d(1.1, 0.3, p, l).value, 1e-15);
  EXPECT_NEAR(a, folded_matern_1d(l - 0.3, l - 1.1, p, l).value, 1e-14);
  const FoldedValue far = folded_matern_1d(50, 50.5, p, 100, 0);
  EXPECT_NEAR(far.value, matern_cov(0.5, p), 1e-30 + 1e-12);
  EXPECT_LT(folded_matern_1d(0.3, 1.1, p, l, 10).tail_estimate, 1e-20);
  // At the boundary the variance doubles.
  EXPECT_NEAR(folded_matern_1d(0, 0, p, 100).value, 2.0, 1e-12);
}

TEST(DenseReference, ScalarCase) {
  const DenseMatrix q = DenseMatrix::Constant(1, 1, 2.0);
  const DenseMatrix a = DenseMatrix::Constant(1, 1, 1.0);
  const Vector mu = Vector::Constant(1, 1.0), y = Vector::Constant(1, 3.0), qe = Vector::Constant(1, 4.0);
  const DenseReference r = dense_reference(q, mu, a, y, qe);
  EXPECT_NEAR(r.sigma_post(0, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.mu_post[0], 1.0 + (4.0 * 2.0) / 6.0, 1e-15);
  const double v = 0.5 + 0.25;
  EXPECT_NEAR(r.marginal_loglik, -0.5 * std::log(2 * std::numbers::pi * v) - 0.5 * 4.0 / v, 1e-14);
  EXPECT_THROW(dense_reference(DenseMatrix::Identity(501, 501), Vector::Zero(501), DenseMatrix::Identity(1, 501),
                               Vector::Zero(1), Vector::Ones(1)),
               InvalidArgument);
}

TEST(DenseReference, RelabelingEquivariance) {
  const int n = 6;
  DenseMatrix q = DenseMatrix::Identity(n, n) * 3;
  for (int i = 0; i + 1 < n; ++i) q(i, i + 1) = q(i + 1, i) = -1;
  DenseMatrix a = DenseMatrix::Zero(2, n);
  a(0, 1) = 0.3, a(0, 2) = 0.7, a(1, 4) = 1.0;
  const Vector mu = Vector::LinSpaced(n, 0, 1), y = (Vector(2) << 1, -1).finished(), qe = Vector::Constant(2, 5);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
  perm.indices() << 3, 0, 5, 1, 4, 2;
  const DenseReference r = dense_reference(q, mu, a, y, qe);
  const DenseReference s = dense_reference(perm * q * perm.transpose(), perm * mu, a * perm.transpose(), y, qe);
  EXPECT_LT((perm * r.mu_post - s.mu_post).norm(), 1e-12);
  EXPECT_LT((perm * r.sigma_post * perm.transpose() - s.sigma_post).norm(), 1e-12);
  EXPECT_NEAR(r.marginal_loglik, s.marginal_loglik, 1e-12);
}
