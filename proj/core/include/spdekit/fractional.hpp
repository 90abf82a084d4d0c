#pragma once

#include "spdekit/assembly.hpp"
#include "spdekit/precision.hpp"
#include "spdekit/sparse.hpp"

#include <complex>
#include <vector>

namespace spdekit {

// r(x) = p(x) / q(x) with p(x) = p_scale * prod (x - p_roots), likewise q.
struct RationalFunction {
  std::vector<std::complex<double>> numerator_roots;
  double numerator_scale = 1.0;
  std::vector<std::complex<double>> denominator_roots;
  double denominator_scale = 1.0;

  double numerator(double x) const;
  double denominator(double x) const;
  double operator()(double x) const { return numerator(x) / denominator(x); }
};

struct RationalFit {
  RationalFunction r;
  int order = 0;
  double exponent = 0.0;  // r(x) approximates x^exponent
  double lo = 0.0;
  double hi = 0.0;
  // max |r(x) / x^exponent - 1| over 10^4 log-spaced points of [lo, hi].
  double sup_error = 0.0;
  int iterations = 0;
};

inline constexpr int kMaxRationalOrder = 8;
inline constexpr int kSupErrorGridSize = 10000;

// Degree (m, m) approximation of x^(alpha_frac / 2) on [lo, hi] minimising the
// maximum relative error: linearised least squares on a log-spaced grid,
// iterated with denominator rescaling and then with Lawson reweighting.
RationalFit rational_fit(double alpha_frac, double lo, double hi, int order);

double rational_sup_error(const RationalFunction& r, double exponent, double lo, double hi,
                          int grid = kSupErrorGridSize);

struct SpectralInterval {
  double lo = 0.0;
  double hi = 0.0;
  double power_estimate = 0.0;
  double gershgorin_bound = 0.0;
};

inline constexpr int kPowerIterations = 30;
inline constexpr double kSpectralSafety = 1.05;

// Bracket of the spectrum of C^{-1} K, K = diag(kappa^2) C + G: lo = min kappa^2,
// hi = 1.05 times a power-iteration estimate, capped by the Gershgorin bound.
SpectralInterval estimate_spectral_interval(const Vector& kappa, const FemMatrices& fem);

// u = P x with x ~ N(0, Q_x^{-1}), so Cov(u) = P Q_x^{-1} P'.
// Q_x = p(M~)' B p(M~) with B = C M^n. The assembled Q_x is badly conditioned on
// fine meshes, so solves and sampling go through the factors: B and one SPD
// matrix per numerator root (K/hi - r C for a real root r, and
// K C^{-1} K / hi^2 - 2 Re(r) K / hi + |r|^2 C for a complex pair).
struct RationalOperator {
  SparseMatrix p;
  SparseSymMatrix q_x;
  int order = 0;
  SpectralInterval interval;
  RationalFit fit;
  bool experimental = false;  // set for spatially varying parameters

  SparseSymMatrix integer_part;
  std::vector<SparseSymMatrix> root_factors;
  Vector c_lumped;
  double numerator_scale = 1.0;

  // Dense P Q_x^{-1} P'; intended for small meshes.
  DenseMatrix covariance() const;
  // Columns P Q_x^{-1} P' e_j for the given vertices.
  DenseMatrix covariance_columns(const std::vector<Index>& vertices) const;
  Vector sample(std::uint64_t seed) const;
};

inline constexpr int kDefaultRationalOrder = 4;

// With alpha = n + f, f in (0, 1), and M = C^{-1} K, M~ = M / hi:
// P = tau^{-1} hi^{-f/2} q(M~), Q_x = C p(M~) M^n p(M~), where p/q fits t^{f/2} on [lo/hi, 1].
// Integer alpha gives P = I and Q_x from build_precision.
RationalOperator build_fractional(const FieldModel& model, const FemMatrices& fem, int order = kDefaultRationalOrder);

}  // namespace spdekit
