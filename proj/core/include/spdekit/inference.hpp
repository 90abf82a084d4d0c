#pragma once

#include "spdekit/cholesky.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/sparse.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace spdekit {

struct Observations {
  std::vector<Point> locations;
  Vector values;
  // Per-observation noise precision tau_e^2.
  Vector noise_precision;

  Index size() const { return values.size(); }
  void validate() const;
};

// Gaussian conditioning Q_post = Q_u + A' Q_e A, Q_post (mu_post - mu_u) = A' Q_e (y - A mu_u).
struct Posterior {
  SparseSymMatrix q_post;
  Vector mu_post;
  Vector mu_prior;
  CholeskyFactor factor;

  Index size() const { return mu_post.size(); }
};

Posterior condition(const SparseSymMatrix& q_u, const Vector& mu_u, const SparseMatrix& a, const Vector& y,
                    const Vector& noise_precision);
// Throws InvalidArgument when any observation lies outside the mesh.
Posterior condition(const SparseSymMatrix& q_u, const Vector& mu_u, const ProjectionMatrix& a,
                    const Observations& obs);

// A' diag(q_e) A as a symmetric matrix.
SparseSymMatrix weighted_gram(const SparseMatrix& a, const Vector& q_e);

struct Marginals {
  Vector mean;
  Vector sd;
};

Marginals posterior_marginals(const Posterior& post);

struct Prediction {
  Vector mean;
  Vector sd;
  // Exterior points get NaN mean and sd.
  std::vector<bool> exterior;
};

// Kriging at arbitrary points. Variances use the selected inverse, with direct
// solves for any basis pair outside its pattern.
Prediction predict(const Posterior& post, const Mesh& mesh, std::span<const Point> points);
Prediction predict(const Posterior& post, const ProjectionMatrix& a);

// Log-parameters of a Gaussian SPDE model with noisy observations. The optional
// coefficient vectors parameterise log kappa(s) and log tau(s) through basis
// expansions supplied by the model builder.
struct HyperParams {
  double log_kappa = 0.0;
  double log_tau = 0.0;
  double log_tau_e = 0.0;
  Vector kappa_coefficients;
  Vector tau_coefficients;

  Index size() const { return 3 + kappa_coefficients.size() + tau_coefficients.size(); }
  Vector to_vector() const;
  // Uses `shape` for the coefficient lengths.
  static HyperParams from_vector(const Vector& v, const HyperParams& shape);
  bool is_finite() const;
};

struct LatentPrior {
  SparseSymMatrix q;
  Vector mu;
};

using ModelBuilder = std::function<LatentPrior(const HyperParams&)>;
using LogPrior = std::function<double(const HyperParams&)>;

// Independent normal priors on the entries of HyperParams::to_vector().
struct GaussianLogPrior {
  Vector mean;
  Vector sd;
  double operator()(const HyperParams& theta) const;
};

LogPrior flat_log_prior();

// Latent model, observation matrix and data. The noise precision is
// exp(2 log_tau_e) * relative_precision.
struct GaussianProblem {
  ModelBuilder builder;
  SparseMatrix a;
  Vector y;
  Vector relative_precision;

  void validate() const;
};

struct LogPosteriorOptions {
  // Point u at which the identity p(theta|y) ~ p(theta) p(u|theta) p(y|u,theta) / p(u|y,theta)
  // is evaluated; defaults to the posterior mean.
  const Vector* evaluation_point = nullptr;
  // Receives the reason when the value is -infinity.
  std::string* warning = nullptr;
};

// log p(theta) + log p(u|theta) + log p(y|u,theta) - log p(u|y,theta). The
// Gaussian normalising constants are kept, so the value equals the log marginal
// likelihood plus the log prior. Factorisation failures yield -infinity.
double log_posterior_theta(const GaussianProblem& problem, const HyperParams& theta, const LogPrior& prior,
                           const LogPosteriorOptions& options = {});

struct FitOptions {
  int max_iterations = 500;
  double tolerance = 1e-6;  // simplex diameter in log-parameter space
  double initial_step = 0.5;
  // Entries of to_vector() that are optimised; empty means all.
  std::vector<bool> active;
};

struct TraceEntry {
  Vector theta;
  double log_posterior = 0.0;
};

struct FitResult {
  HyperParams theta;
  double log_posterior = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

// Nelder-Mead maximisation of log_posterior_theta.
FitResult fit_theta(const GaussianProblem& problem, const HyperParams& init, const LogPrior& prior,
                    const FitOptions& options = {});

// Generic Nelder-Mead maximiser used by fit_theta.
struct NelderMeadResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceEntry> trace;
};

NelderMeadResult nelder_mead_maximize(const std::function<double(const Vector&)>& f, const Vector& x0,
                                      const FitOptions& options);

}  // namespace spdekit
