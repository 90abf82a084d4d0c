#include "spdekit/oracles.hpp"

#include "spdekit/error.hpp"

#include <cmath>
#include <numbers>

namespace spdekit::oracles {

using std::numbers::pi;

MaternParams MaternParams::from_spde(double kappa, double tau, double alpha, int d) {
  MaternParams p{kappa, alpha - 0.5 * d, matern_sigma2(kappa, tau, alpha, d)};
  p.validate();
  return p;
}

void MaternParams::validate() const {
  if (!(kappa > 0.0) || !(nu > 0.0) || !(sigma2 > 0.0))
    throw InvalidArgument("MaternParams: kappa, nu and sigma2 must be positive");
}

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw InvalidArgument("bessel_k: argument must be positive");
  return std::cyl_bessel_k(std::abs(nu), x);
}

double matern_cov(double r, const MaternParams& p) {
  if (!(r >= 0.0)) throw InvalidArgument("matern_cov: distance must be non-negative");
  p.validate();
  const double x = p.kappa * r;
  if (x == 0.0) return p.sigma2;
  // Beyond this the value underflows anyway.
  if (x > 700.0) return 0.0;
  const double log_scale = std::log(p.sigma2) - std::lgamma(p.nu) - (p.nu - 1.0) * std::log(2.0) + p.nu * std::log(x);
  return std::exp(log_scale) * bessel_k(p.nu, x);
}

double matern_sigma2(double kappa, double tau, double alpha, int d) {
  const double nu = alpha - 0.5 * d;
  if (!(nu > 0.0)) throw InvalidArgument("matern_sigma2: alpha must exceed d/2");
  if (!(kappa > 0.0) || !(tau > 0.0)) throw InvalidArgument("matern_sigma2: kappa and tau must be positive");
  return std::tgamma(nu) / (std::tgamma(alpha) * std::pow(4.0 * pi, 0.5 * d) * std::pow(kappa, 2.0 * nu) * tau * tau);
}

double spectral_density_rd(double k_norm, double kappa, double tau, double alpha, int d) {
  return 1.0 / (tau * tau * std::pow(2.0 * pi, d) * std::pow(kappa * kappa + k_norm * k_norm, alpha));
}

Vector legendre_values(double x, int k_max) {
  if (k_max < 0) throw InvalidArgument("legendre_values: k_max must be non-negative");
  Vector p(k_max + 1);
  p[0] = 1.0;
  if (k_max >= 1) p[1] = x;
  for (int k = 1; k < k_max; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
  return p;
}

SeriesValue sphere_cov_series(double angle, double kappa, double tau, double alpha, int k_max) {
  if (!(alpha > 1.0)) throw InvalidArgument("sphere_cov_series: the series converges only for alpha > 1");
  if (k_max < 10) throw InvalidArgument("sphere_cov_series: k_max must be at least 10");
  if (!(angle >= 0.0 && angle <= pi)) throw InvalidArgument("sphere_cov_series: angle must lie in [0, pi]");
  const double scale = 1.0 / (4.0 * pi * tau * tau);
  const Vector p = legendre_values(std::cos(angle), k_max);
  SeriesValue out;
  for (int k = 0; k <= k_max; ++k) {
    out.value += (2.0 * k + 1.0) * scale * std::pow(kappa * kappa + k * (k + 1.0), -alpha) * p[k];
  }
  // (2k+1) is the derivative of k(k+1), so the tail sum is bounded by the integral from k_max.
  const double lam = kappa * kappa + k_max * (k_max + 1.0);
  out.tail_bound = scale * std::pow(lam, 1.0 - alpha) / (alpha - 1.0);
  return out;
}

FoldedValue folded_matern_1d(double s, double s2, const MaternParams& p, double length, int terms) {
  if (!(length > 0.0)) throw InvalidArgument("folded_matern_1d: length must be positive");
  if (terms < 0) throw InvalidArgument("folded_matern_1d: terms must be non-negative");
  auto ring = [&](int k) {
    double v = matern_cov(std::abs(s - s2 + 2.0 * k * length), p) + matern_cov(std::abs(s + s2 + 2.0 * k * length), p);
    if (k != 0)
      v += matern_cov(std::abs(s - s2 - 2.0 * k * length), p) + matern_cov(std::abs(s + s2 - 2.0 * k * length), p);
    return v;
  };
  FoldedValue out;
  for (int k = 0; k <= terms; ++k) out.value += ring(k);
  out.tail_estimate = ring(terms + 1);
  return out;
}

DenseReference dense_reference(const DenseMatrix& q_u, const Vector& mu_u, const DenseMatrix& a, const Vector& y,
                               const Vector& noise_precision) {
  const Index n = q_u.rows();
  if (n > kDenseReferenceCap) throw InvalidArgument("dense_reference: at most 500 latent variables");
  if (q_u.cols() != n || mu_u.size() != n || a.cols() != n || a.rows() != y.size() ||
      noise_precision.size() != y.size())
    throw InvalidArgument("dense_reference: dimension mismatch");
  const DenseMatrix at_qe = a.transpose() * noise_precision.asDiagonal();
  const DenseMatrix q_post = q_u + at_qe * a;
  DenseReference out;
  out.sigma_post = q_post.inverse();
  out.mu_post = mu_u + out.sigma_post * (at_qe * (y - a * mu_u));

  const DenseMatrix cov = a * q_u.inverse() * a.transpose() + DenseMatrix(noise_precision.cwiseInverse().asDiagonal());
  const Eigen::LLT<DenseMatrix> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("dense_reference: marginal covariance is not positive definite");
  const Vector r = y - a * mu_u;
  const Vector w = llt.matrixL().solve(r);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  out.marginal_loglik = -0.5 * (static_cast<double>(y.size()) * std::log(2.0 * pi) + logdet + w.squaredNorm());
  return out;
}

}  // namespace spdekit::oracles
