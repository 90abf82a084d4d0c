#pragma once

#include "spdekit/cholesky.hpp"
#include "spdekit/sparse.hpp"

#include <cstdint>
#include <string_view>

namespace spdekit {

enum class MixingFamily { nig, gal };

std::string_view to_string(MixingFamily family);
MixingFamily parse_mixing_family(std::string_view text);

// Cell noise gamma h + mu (v - h) + sigma sqrt(v) z with mixing variables v:
// NIG: v_j ~ IG(mean h_j, shape eta h_j^2); GAL: v_j ~ Gamma(shape nu_g h_j, rate nu_g).
// Both have E[v_j] = h_j; large eta or nu_g approaches the Gaussian limit v = h.
struct TypeGNoise {
  MixingFamily family = MixingFamily::nig;
  double gamma = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double nig_shape = 1.0;  // eta
  double gal_rate = 1.0;   // nu_g

  void validate() const;
};

struct TypeGField {
  SparseSymMatrix k;  // kappa^2 C_lumped + G
  double tau = 1.0;
  Vector h;           // mesh weights <psi_j, 1>
  TypeGNoise noise;

  void validate() const;
};

// Inverse Gaussian draw from one standard normal and one uniform
// (Michael-Schucany-Haas transformation with a single acceptance test).
double inverse_gaussian(double mean, double shape, double normal, double uniform);

Vector sample_mixing(const TypeGNoise& noise, const Vector& h, std::uint64_t seed);

// Factorises K once and draws fields u = tau^{-1} K^{-1} [mu (v - h) + gamma h + sigma sqrt(v) z].
class TypeGSampler {
 public:
  explicit TypeGSampler(TypeGField field);

  const TypeGField& field() const { return field_; }
  Vector sample(std::uint64_t seed) const;
  // Draw given fixed mixing variables v.
  Vector sample_conditional(const Vector& v, std::uint64_t seed) const;
  // tau^{-1} K^{-1} (mu (v - h) + gamma h).
  Vector conditional_mean(const Vector& v) const;
  // tau^{-2} K^{-1} diag(v) K^{-1}, dense; intended for small meshes.
  DenseMatrix conditional_covariance(const Vector& v) const;

 private:
  TypeGField field_;
  CholeskyFactor factor_;
};

Vector sample_type_g_field(const TypeGField& field, std::uint64_t seed);

}  // namespace spdekit
