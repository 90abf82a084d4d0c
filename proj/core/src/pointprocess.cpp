#include "spdekit/pointprocess.hpp"

#include "spdekit/cholesky.hpp"
#include "spdekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spdekit {

namespace {

constexpr double kPoissonPiece = 30.0;
// Candidate points of a triangle use counter attempts from here on.
constexpr std::uint32_t kCandidateAttempt = 1u << 20;

Vector clamped_exp(const Vector& eta) { return eta.array().max(kMinLogIntensity).exp().matrix(); }

}  // namespace

LgcpLikelihood::LgcpLikelihood(const Mesh& mesh, const PointPattern& pattern) : weights_(vertex_weights(mesh)) {
  const ProjectionMatrix a = evaluate_basis(mesh, pattern.points);
  if (a.has_exterior())
    throw InvalidArgument("lgcp: " + std::to_string(a.exterior_count()) + " point(s) outside the mesh");
  counts_ = a.matrix.multiply_transpose(Vector::Ones(pattern.size()));
}

double LgcpLikelihood::value(const Vector& eta) const {
  if (eta.size() != weights_.size()) throw InvalidArgument("lgcp: eta length does not match the mesh");
  if (!eta.allFinite()) throw InvalidArgument("lgcp: eta must be finite");
  return -weights_.dot(clamped_exp(eta)) + counts_.dot(eta);
}

Vector LgcpLikelihood::gradient(const Vector& eta) const {
  if (eta.size() != weights_.size()) throw InvalidArgument("lgcp: eta length does not match the mesh");
  return counts_ - weights_.cwiseProduct(clamped_exp(eta));
}

Vector LgcpLikelihood::hessian_diagonal(const Vector& eta) const {
  if (eta.size() != weights_.size()) throw InvalidArgument("lgcp: eta length does not match the mesh");
  return -weights_.cwiseProduct(clamped_exp(eta));
}

double lgcp_loglik(const Vector& eta, const Mesh& mesh, const PointPattern& pattern) {
  return LgcpLikelihood(mesh, pattern).value(eta);
}

Index poisson_draw(double mean, const CounterRng& rng, std::uint64_t index) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidArgument("poisson_draw: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  const auto pieces = static_cast<std::uint32_t>(std::ceil(mean / kPoissonPiece));
  const double m = mean / pieces;
  Index total = 0;
  for (std::uint32_t piece = 0; piece < pieces; ++piece) {
    const double u = rng.uniform(index, piece, 0);
    double p = std::exp(-m);
    double cdf = p;
    Index k = 0;
    while (u > cdf && p > 0.0) {
      ++k;
      p *= m / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

PointPattern simulate_lgcp(const Vector& eta, const Mesh& mesh, std::uint64_t seed) {
  if (mesh.kind() != MeshKind::planar) throw InvalidArgument("simulate_lgcp: only planar meshes are supported");
  if (eta.size() != mesh.num_vertices()) throw InvalidArgument("simulate_lgcp: eta length does not match the mesh");
  if (eta.array().isNaN().any()) throw InvalidArgument("simulate_lgcp: eta contains NaN");
  const Vector e = eta.array().max(kMinLogIntensity).matrix();
  const CounterRng rng(seed, streams::kPointProcess);
  PointPattern out;
  for (Index s = 0; s < mesh.num_simplices(); ++s) {
    const Simplex& t = mesh.simplex(s);
    const double top = std::max({e[t[0]], e[t[1]], e[t[2]]});
    if (!std::isfinite(top)) throw InvalidArgument("simulate_lgcp: eta must be finite");
    const Index n = poisson_draw(std::exp(top) * mesh.simplex_measure(s), rng, s);
    const Point& a = mesh.vertex(t[0]);
    const Point& b = mesh.vertex(t[1]);
    const Point& c = mesh.vertex(t[2]);
    for (Index i = 0; i < n; ++i) {
      const auto att = kCandidateAttempt + 2 * static_cast<std::uint32_t>(i);
      double r1 = rng.uniform(s, att, 0);
      double r2 = rng.uniform(s, att, 1);
      if (r1 + r2 > 1.0) {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
      }
      const double r0 = 1.0 - r1 - r2;
      const double log_lambda = r0 * e[t[0]] + r1 * e[t[1]] + r2 * e[t[2]];
      if (rng.uniform(s, att + 1, 0) >= std::exp(log_lambda - top)) continue;
      out.points.push_back({r0 * a[0] + r1 * b[0] + r2 * c[0], r0 * a[1] + r1 * b[1] + r2 * c[1], 0.0});
    }
  }
  return out;
}

LgcpFit lgcp_fit_eta(const SparseSymMatrix& q, const Vector& mu, const Mesh& mesh, const PointPattern& pattern,
                     const LgcpFitOptions& options) {
  if (q.size() != mesh.num_vertices() || mu.size() != q.size())
    throw InvalidArgument("lgcp_fit_eta: prior does not match the mesh");
  const LgcpLikelihood lik(mesh, pattern);
  auto objective = [&](const Vector& eta) {
    const Vector d = eta - mu;
    return lik.value(eta) - 0.5 * q.quadratic_form(d);
  };
  LgcpFit fit;
  Vector eta = mu;
  double f = objective(eta);
  fit.objective_trace.push_back(f);
  auto finish = [&](int iterations) {
    fit.mode = eta;
    fit.iterations = iterations;
    fit.precision = q + SparseSymMatrix::diagonal(-lik.hessian_diagonal(eta));
    return fit;
  };
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vector g = lik.gradient(eta) - q.multiply(eta - mu);
    if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) return finish(it);
    const SparseSymMatrix h = q + SparseSymMatrix::diagonal(-lik.hessian_diagonal(eta));
    const Vector step = CholeskyFactor::factorize(h).solve(g);
    double scale = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_halvings; ++k, scale *= 0.5) {
      const Vector trial = eta + scale * step;
      const double ft = objective(trial);
      if (ft >= f) {
        eta = trial;
        f = ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    fit.objective_trace.push_back(f);
  }
  const Vector g = lik.gradient(eta) - q.multiply(eta - mu);
  if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) return finish(options.max_iterations);
  // Roundoff floor: the predicted gain of one more Newton step is negligible.
  const SparseSymMatrix h = q + SparseSymMatrix::diagonal(-lik.hessian_diagonal(eta));
  const double decrement = 0.5 * g.dot(CholeskyFactor::factorize(h).solve(g));
  if (decrement < options.decrement_tolerance * std::max(1.0, std::abs(f))) return finish(options.max_iterations);
  std::ostringstream msg;
  msg << "lgcp_fit_eta: no convergence (gradient norm " << g.lpNorm<Eigen::Infinity>() << ")";
  throw NumericalError(msg.str());
}

}  // namespace spdekit
