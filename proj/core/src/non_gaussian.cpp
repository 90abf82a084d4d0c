#include "spdekit/non_gaussian.hpp"

#include "spdekit/error.hpp"
#include "spdekit/rng.hpp"

#include <cmath>
#include <string>

namespace spdekit {

namespace {

// Marsaglia-Tsang; attempts use counter blocks (index, 2t) and (index, 2t + 1).
double gamma_draw(const CounterRng& rng, std::uint64_t index, double shape) {
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(rng.uniform(index, 1, 1), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (std::uint32_t t = 0;; ++t) {
    const double z = rng.normal(index, 2 * t);
    const double v = std::pow(1.0 + c * z, 3);
    if (v <= 0.0) continue;
    const double u = rng.uniform(index, 2 * t + 1, 0);
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v * boost;
  }
}

}  // namespace

std::string_view to_string(MixingFamily family) { return family == MixingFamily::nig ? "nig" : "gal"; }

MixingFamily parse_mixing_family(std::string_view text) {
  if (text == "nig") return MixingFamily::nig;
  if (text == "gal") return MixingFamily::gal;
  throw InvalidArgument("unknown mixing family '" + std::string(text) + "' (expected nig or gal)");
}

void TypeGNoise::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("TypeGNoise: sigma must be positive");
  if (!std::isfinite(gamma) || !std::isfinite(mu)) throw InvalidArgument("TypeGNoise: gamma and mu must be finite");
  if (family == MixingFamily::nig && !(nig_shape > 0.0))
    throw InvalidArgument("TypeGNoise: NIG shape must be positive");
  if (family == MixingFamily::gal && !(gal_rate > 0.0)) throw InvalidArgument("TypeGNoise: GAL rate must be positive");
}

void TypeGField::validate() const {
  noise.validate();
  if (!(tau > 0.0)) throw InvalidArgument("TypeGField: tau must be positive");
  if (h.size() != k.size()) throw InvalidArgument("TypeGField: h length does not match K");
  if (!(h.array() > 0.0).all()) throw InvalidArgument("TypeGField: mesh weights must be positive");
}

double inverse_gaussian(double mean, double shape, double normal, double uniform) {
  const double y = normal * normal;
  const double my = mean * y;
  const double x = mean * (1.0 + (my - std::sqrt(4.0 * shape * my + my * my)) / (2.0 * shape));
  return uniform <= mean / (mean + x) ? x : mean * mean / x;
}

Vector sample_mixing(const TypeGNoise& noise, const Vector& h, std::uint64_t seed) {
  noise.validate();
  const CounterRng rng(seed, streams::kMixing);
  Vector v(h.size());
  for (Index j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0)) throw InvalidArgument("sample_mixing: cell measures must be positive");
    if (noise.family == MixingFamily::nig) {
      v[j] = inverse_gaussian(h[j], noise.nig_shape * h[j] * h[j], rng.normal(j, 0), rng.uniform(j, 1, 0));
    } else {
      v[j] = gamma_draw(rng, j, noise.gal_rate * h[j]) / noise.gal_rate;
    }
  }
  return v;
}

TypeGSampler::TypeGSampler(TypeGField field) : field_(std::move(field)) {
  field_.validate();
  factor_ = CholeskyFactor::factorize(field_.k);
}

Vector TypeGSampler::conditional_mean(const Vector& v) const {
  if (v.size() != field_.h.size()) throw InvalidArgument("TypeGSampler: mixing vector length mismatch");
  const TypeGNoise& n = field_.noise;
  return factor_.solve(Vector(n.mu * (v - field_.h) + n.gamma * field_.h)) / field_.tau;
}

DenseMatrix TypeGSampler::conditional_covariance(const Vector& v) const {
  const DenseMatrix kinv = factor_.solve(DenseMatrix(DenseMatrix::Identity(v.size(), v.size())));
  const double s = field_.noise.sigma / field_.tau;
  return s * s * kinv * v.asDiagonal() * kinv;
}

Vector TypeGSampler::sample_conditional(const Vector& v, std::uint64_t seed) const {
  if (v.size() != field_.h.size()) throw InvalidArgument("TypeGSampler: mixing vector length mismatch");
  const TypeGNoise& n = field_.noise;
  const CounterRng rng(seed, streams::kTypeGNoise);
  Vector rhs = n.mu * (v - field_.h) + n.gamma * field_.h;
  for (Index j = 0; j < v.size(); ++j) rhs[j] += n.sigma * std::sqrt(v[j]) * rng.normal(j);
  return factor_.solve(rhs) / field_.tau;
}

Vector TypeGSampler::sample(std::uint64_t seed) const {
  return sample_conditional(sample_mixing(field_.noise, field_.h, seed), seed);
}

Vector sample_type_g_field(const TypeGField& field, std::uint64_t seed) { return TypeGSampler(field).sample(seed); }

}  // namespace spdekit
