#include "spdekit/precision.hpp"

#include "spdekit/error.hpp"

#include <cmath>

namespace spdekit {

FieldModel FieldModel::stationary(const Mesh& mesh, double alpha, double kappa, double tau) {
  FieldModel m;
  m.dimension = mesh.dimension();
  m.alpha = alpha;
  m.kappa = Vector::Constant(mesh.num_vertices(), kappa);
  m.tau = Vector::Constant(mesh.num_vertices(), tau);
  m.validate();
  return m;
}

bool FieldModel::is_stationary() const {
  if (size() == 0) return true;
  return (kappa.array() == kappa[0]).all() && (tau.array() == tau[0]).all() && !anisotropy && !barrier_mask;
}

Vector FieldModel::practical_range() const { return std::sqrt(8.0 * nu()) * kappa.cwiseInverse(); }

void FieldModel::validate() const {
  if (dimension < 1 || dimension > 2) throw InvalidArgument("FieldModel: dimension must be 1 or 2");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("FieldModel: alpha must be at least 1");
  if (kappa.size() != tau.size()) throw InvalidArgument("FieldModel: kappa and tau sizes differ");
  for (Index i = 0; i < kappa.size(); ++i) {
    if (!(kappa[i] > 0.0) || !std::isfinite(kappa[i]))
      throw InvalidArgument("FieldModel: kappa must be positive and finite (vertex " + std::to_string(i) + ")");
    if (!(tau[i] > 0.0) || !std::isfinite(tau[i]))
      throw InvalidArgument("FieldModel: tau must be positive and finite (vertex " + std::to_string(i) + ")");
  }
}

SparseSymMatrix build_operator(const Vector& kappa, const FemMatrices& fem) {
  if (kappa.size() != fem.size()) throw InvalidArgument("build_operator: dimension mismatch with FEM matrices");
  return SparseSymMatrix::diagonal(kappa.array().square().matrix().cwiseProduct(fem.c_lumped)) + fem.g;
}

SparseSymMatrix build_precision(const FieldModel& model, const FemMatrices& fem) {
  model.validate();
  const double rounded = std::round(model.alpha);
  if (rounded != model.alpha || rounded < 1 || rounded > kMaxIntegerAlpha)
    throw InvalidArgument("build_precision: alpha must be one of 1, 2, 3, 4");
  if (model.size() != fem.size()) throw InvalidArgument("build_precision: dimension mismatch with FEM matrices");
  const int alpha = static_cast<int>(rounded);

  const SparseSymMatrix k = build_operator(model.kappa, fem);
  if (alpha == 1) return k.scaled(model.tau);

  const SparseMatrix kg = k.to_general();
  const SparseMatrix ck = kg.scaled(fem.c_lumped.cwiseInverse(), Vector());
  SparseMatrix q = kg;
  for (int a = 1; a < alpha; ++a) q = q * ck;
  return SparseSymMatrix::from_general(q).scaled(model.tau);
}

Vector make_barrier_kappa(const Mesh& mesh, const std::vector<bool>& barrier_mask, double range_normal,
                          double range_factor) {
  if (static_cast<Index>(barrier_mask.size()) != mesh.num_simplices())
    throw InvalidArgument("make_barrier_kappa: mask length does not match the number of simplices");
  if (!(range_normal > 0.0)) throw InvalidArgument("make_barrier_kappa: range must be positive");
  if (!(range_factor >= kMinBarrierRangeFactor))
    throw InvalidArgument("make_barrier_kappa: range_factor must be at least 10");
  const double nu = 2.0 - 0.5 * mesh.dimension();
  const double kappa = std::sqrt(8.0 * nu) / range_normal;
  std::vector<bool> touches_normal(static_cast<std::size_t>(mesh.num_vertices()), false);
  for (Index s = 0; s < mesh.num_simplices(); ++s) {
    if (barrier_mask[s]) continue;
    for (int a = 0; a < mesh.simplex_size(); ++a) touches_normal[mesh.simplex(s)[a]] = true;
  }
  Vector out(mesh.num_vertices());
  for (Index i = 0; i < mesh.num_vertices(); ++i) out[i] = touches_normal[i] ? kappa : kappa * range_factor;
  return out;
}

SparseSymMatrix ar1_precision(double phi, Index steps) {
  if (!(std::abs(phi) < 1.0)) throw InvalidArgument("ar1_precision: |phi| must be below 1");
  if (steps < 2) throw InvalidArgument("ar1_precision: need at least 2 time steps");
  const double s = 1.0 / (1.0 - phi * phi);
  std::vector<Triplet> t;
  for (Index i = 0; i < steps; ++i) {
    const bool end = i == 0 || i == steps - 1;
    t.push_back({i, i, end ? s : (1.0 + phi * phi) * s});
    if (i + 1 < steps) t.push_back({i + 1, i, -phi * s});
  }
  return SparseSymMatrix::from_triplets(steps, t);
}

SpaceTimeModel SpaceTimeModel::from_damping(FieldModel spatial, Index time_steps, double time_step, double damping) {
  if (!(time_step > 0.0) || !(damping > 0.0))
    throw InvalidArgument("SpaceTimeModel: time step and damping must be positive");
  SpaceTimeModel m{std::move(spatial), time_steps, std::exp(-time_step * damping)};
  m.validate();
  return m;
}

void SpaceTimeModel::validate() const {
  if (time_steps < 2) throw InvalidArgument("SpaceTimeModel: need at least 2 time steps");
  if (!(phi >= 0.0 && phi < 1.0)) throw InvalidArgument("SpaceTimeModel: phi must lie in [0, 1)");
}

SparseSymMatrix build_spacetime_precision(const SpaceTimeModel& model, const FemMatrices& fem, Index dimension_cap) {
  model.validate();
  if (model.time_steps > dimension_cap / std::max<Index>(fem.size(), 1))
    throw InvalidArgument("build_spacetime_precision: T * n exceeds the configured cap");
  const SparseSymMatrix qs = build_precision(model.spatial, fem);
  return kronecker(ar1_precision(model.phi, model.time_steps), qs);
}

}  // namespace spdekit
