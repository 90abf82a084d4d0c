#pragma once

#include "spdekit/mesh.hpp"
#include "spdekit/rng.hpp"
#include "spdekit/sparse.hpp"

#include <cstdint>
#include <vector>

namespace spdekit {

struct PointPattern {
  std::vector<Point> points;

  Index size() const { return static_cast<Index>(points.size()); }
};

// Log-intensities below this are treated as this value.
inline constexpr double kMinLogIntensity = -700.0;

// Discretised LGCP log-likelihood -sum_j w_j exp(eta_j) + sum_i (A eta)_i with
// w from vertex_weights and A the basis evaluated at the points.
class LgcpLikelihood {
 public:
  // Throws InvalidArgument when a point lies outside the mesh.
  LgcpLikelihood(const Mesh& mesh, const PointPattern& pattern);

  double value(const Vector& eta) const;
  Vector gradient(const Vector& eta) const;
  // The Hessian is diagonal: -w_j exp(eta_j).
  Vector hessian_diagonal(const Vector& eta) const;

  const Vector& weights() const { return weights_; }
  // A' 1: basis mass of the points at each vertex.
  const Vector& point_counts() const { return counts_; }

 private:
  Vector weights_;
  Vector counts_;
};

double lgcp_loglik(const Vector& eta, const Mesh& mesh, const PointPattern& pattern);

// Per-triangle thinning with exp(max vertex eta) as the bound; planar meshes only.
PointPattern simulate_lgcp(const Vector& eta, const Mesh& mesh, std::uint64_t seed);

// Poisson draw by sequential inversion, split into pieces of mean below 30.
Index poisson_draw(double mean, const CounterRng& rng, std::uint64_t index);

struct LgcpFitOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;
  // When iterations stop short of the gradient tolerance, accept if g' H^{-1} g / 2 is below this times max(1, |objective|).
  double decrement_tolerance = 1e-13;
  int max_halvings = 60;
};

struct LgcpFit {
  Vector mode;
  // Q + diag(w exp(mode)).
  SparseSymMatrix precision;
  // Penalised objective after each accepted step, starting from the initial value.
  std::vector<double> objective_trace;
  int iterations = 0;
};

// Posterior mode of eta under a N(mu, Q^{-1}) prior by damped Newton iterations.
LgcpFit lgcp_fit_eta(const SparseSymMatrix& q, const Vector& mu, const Mesh& mesh, const PointPattern& pattern,
                     const LgcpFitOptions& options = {});

}  // namespace spdekit
