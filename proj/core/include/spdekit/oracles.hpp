#pragma once

#include "spdekit/sparse.hpp"

namespace spdekit::oracles {

struct MaternParams {
  double kappa = 1.0;
  double nu = 1.0;
  double sigma2 = 1.0;

  // nu = alpha - d/2 and sigma2 from matern_sigma2.
  static MaternParams from_spde(double kappa, double tau, double alpha, int d);
  void validate() const;
};

// Modified Bessel function of the second kind.
double bessel_k(double nu, double x);

// sigma2 / (Gamma(nu) 2^(nu-1)) (kappa r)^nu K_nu(kappa r); sigma2 at r = 0.
double matern_cov(double r, const MaternParams& p);

// Gamma(nu) / (Gamma(alpha) (4 pi)^(d/2) kappa^(2 nu) tau^2), nu = alpha - d/2.
double matern_sigma2(double kappa, double tau, double alpha, int d);

// 1 / (tau^2 (2 pi)^d (kappa^2 + k^2)^alpha).
double spectral_density_rd(double k_norm, double kappa, double tau, double alpha, int d);

// Legendre polynomials P_0..P_kmax at x, by the three-term recurrence.
Vector legendre_values(double x, int k_max);

struct SeriesValue {
  double value = 0.0;
  // Upper bound on the omitted terms k > k_max, summed at angle 0.
  double tail_bound = 0.0;
};

// sum_{k <= k_max} (2k+1) S(k) P_k(cos angle), S(k) = 1 / (4 pi tau^2 (kappa^2 + k(k+1))^alpha).
SeriesValue sphere_cov_series(double angle, double kappa, double tau, double alpha, int k_max);

struct FoldedValue {
  double value = 0.0;
  // Size of the next omitted ring of images.
  double tail_estimate = 0.0;
};

inline constexpr int kDefaultFoldTerms = 10;

// Covariance of the Neumann-boundary field on [0, length] by the method of images:
// sum over |k| <= terms of rho(|s - s2 + 2kL|) + rho(|s + s2 + 2kL|).
FoldedValue folded_matern_1d(double s, double s2, const MaternParams& p, double length,
                             int terms = kDefaultFoldTerms);

struct DenseReference {
  Vector mu_post;
  DenseMatrix sigma_post;
  // log N(y; A mu_u, A Q_u^{-1} A' + Q_e^{-1}).
  double marginal_loglik = 0.0;
};

inline constexpr Index kDenseReferenceCap = 500;

// Textbook dense Gaussian conditioning; noise_precision holds the diagonal of Q_e.
DenseReference dense_reference(const DenseMatrix& q_u, const Vector& mu_u, const DenseMatrix& a, const Vector& y,
                               const Vector& noise_precision);

}  // namespace spdekit::oracles
