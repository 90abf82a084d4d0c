#pragma once

#include "spdekit/assembly.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/sparse.hpp"

#include <optional>
#include <vector>

namespace spdekit {

// Parameter fields of a Whittle-Matern model sampled at mesh vertices.
struct FieldModel {
  int dimension = 2;  // intrinsic dimension d of the domain
  double alpha = 2.0;
  Vector kappa;  // per vertex, > 0
  Vector tau;    // per vertex, > 0
  std::optional<std::vector<Tensor2>> anisotropy;
  std::optional<std::vector<bool>> barrier_mask;

  static FieldModel stationary(const Mesh& mesh, double alpha, double kappa, double tau);

  Index size() const { return kappa.size(); }
  bool is_stationary() const;
  // nu = alpha - d/2.
  double nu() const { return alpha - 0.5 * dimension; }
  // sqrt(8 nu) / kappa, per vertex.
  Vector practical_range() const;

  // Throws InvalidArgument for alpha < 1 and for non-positive or non-finite parameters.
  void validate() const;
};

inline constexpr int kMaxIntegerAlpha = 4;

// Q = diag(tau) K (C^{-1} K)^{alpha-1} diag(tau), K = diag(kappa^2) C + G, with the
// lumped (diagonal) C. At constant parameters this equals
// tau^2 C^{1/2} (kappa^2 I + C^{-1/2} G C^{-1/2})^alpha C^{1/2}. Output is exactly symmetric.
SparseSymMatrix build_precision(const FieldModel& model, const FemMatrices& fem);

// K = diag(kappa^2) C_lumped + G, the alpha = 1 operator without tau.
SparseSymMatrix build_operator(const Vector& kappa, const FemMatrices& fem);

inline constexpr double kDefaultBarrierRangeFactor = 20.0;
inline constexpr double kMinBarrierRangeFactor = 10.0;

// Per-vertex kappa for a barrier model with alpha = 2: sqrt(8 nu)/range_normal at
// normal vertices, multiplied by range_factor at vertices whose incident
// triangles are all barrier triangles.
Vector make_barrier_kappa(const Mesh& mesh, const std::vector<bool>& barrier_mask, double range_normal,
                          double range_factor = kDefaultBarrierRangeFactor);

// Tridiagonal precision of a unit-variance AR(1) process.
SparseSymMatrix ar1_precision(double phi, Index steps);

struct SpaceTimeModel {
  FieldModel spatial;
  Index time_steps = 2;
  double phi = 0.5;

  // phi = exp(-time_step * damping).
  static SpaceTimeModel from_damping(FieldModel spatial, Index time_steps, double time_step, double damping);
  void validate() const;
};

inline constexpr Index kDefaultSpaceTimeCap = 10'000'000;

// Q_t (x) Q_s, time-major: entry t * n + i is vertex i at time t.
SparseSymMatrix build_spacetime_precision(const SpaceTimeModel& model, const FemMatrices& fem,
                                          Index dimension_cap = kDefaultSpaceTimeCap);

}  // namespace spdekit
