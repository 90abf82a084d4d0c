#include "spdekit/inference.hpp"

#include "spdekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

namespace spdekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_noise(const Vector& q_e, Index m) {
  if (q_e.size() != m) throw InvalidArgument("noise precision length does not match the observations");
  for (Index i = 0; i < m; ++i)
    if (!(q_e[i] > 0.0) || !std::isfinite(q_e[i]))
      throw InvalidArgument("noise precision must be positive and finite");
}

}  // namespace

void Observations::validate() const {
  if (static_cast<Index>(locations.size()) != values.size())
    throw InvalidArgument("Observations: locations and values differ in length");
  for (Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw InvalidArgument("Observations: non-finite value at row " + std::to_string(i));
  check_noise(noise_precision, values.size());
}

SparseSymMatrix weighted_gram(const SparseMatrix& a, const Vector& q_e) {
  if (q_e.size() != a.rows()) throw InvalidArgument("weighted_gram: weight length mismatch");
  std::vector<Triplet> t;
  for (Index r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_indices(r);
    const auto vals = a.row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        // Column indices are sorted, so cols[i] >= cols[j] lies in the lower triangle.
        t.push_back({cols[i], cols[j], q_e[r] * vals[i] * vals[j]});
      }
  }
  return SparseSymMatrix::from_triplets(a.cols(), t);
}

Posterior condition(const SparseSymMatrix& q_u, const Vector& mu_u, const SparseMatrix& a, const Vector& y,
                    const Vector& noise_precision) {
  const Index n = q_u.size();
  if (mu_u.size() != n || a.cols() != n || a.rows() != y.size())
    throw InvalidArgument("condition: dimension mismatch");
  check_noise(noise_precision, y.size());
  Posterior post;
  post.q_post = q_u + weighted_gram(a, noise_precision);
  post.factor = CholeskyFactor::factorize(post.q_post);
  const Vector resid = y - a.multiply(mu_u);
  post.mu_post = mu_u + post.factor.solve(a.multiply_transpose(noise_precision.cwiseProduct(resid)));
  post.mu_prior = mu_u;
  return post;
}

Posterior condition(const SparseSymMatrix& q_u, const Vector& mu_u, const ProjectionMatrix& a,
                    const Observations& obs) {
  obs.validate();
  if (a.has_exterior())
    throw InvalidArgument("condition: " + std::to_string(a.exterior_count()) + " observation(s) outside the mesh");
  return condition(q_u, mu_u, a.matrix, obs.values, obs.noise_precision);
}

Marginals posterior_marginals(const Posterior& post) {
  return {post.mu_post, post.factor.selected_inverse().diagonal().cwiseSqrt()};
}

Prediction predict(const Posterior& post, const ProjectionMatrix& a) {
  const SparseMatrix& m = a.matrix;
  if (m.cols() != post.size()) throw InvalidArgument("predict: projection does not match the posterior");
  const SparseSymMatrix sigma = post.factor.selected_inverse();
  std::map<Index, Vector> columns;
  auto cov = [&](Index i, Index j) {
    if (auto v = sigma.find(i, j)) return *v;
    auto it = columns.find(j);
    if (it == columns.end()) {
      Vector e = Vector::Zero(post.size());
      e[j] = 1.0;
      it = columns.emplace(j, post.factor.solve(e)).first;
    }
    return it->second[i];
  };
  Prediction out;
  out.mean = m.multiply(post.mu_post);
  out.sd.resize(m.rows());
  out.exterior = a.exterior;
  for (Index r = 0; r < m.rows(); ++r) {
    if (a.exterior[r]) {
      out.mean[r] = out.sd[r] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto cols = m.row_indices(r);
    const auto vals = m.row_values(r);
    double var = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) var += vals[i] * vals[j] * cov(cols[i], cols[j]);
    out.sd[r] = std::sqrt(std::max(var, 0.0));
  }
  return out;
}

Prediction predict(const Posterior& post, const Mesh& mesh, std::span<const Point> points) {
  return predict(post, evaluate_basis(mesh, points));
}

Vector HyperParams::to_vector() const {
  Vector v(size());
  v << log_kappa, log_tau, log_tau_e, kappa_coefficients, tau_coefficients;
  return v;
}

HyperParams HyperParams::from_vector(const Vector& v, const HyperParams& shape) {
  if (v.size() != shape.size()) throw InvalidArgument("HyperParams: vector length mismatch");
  HyperParams h;
  h.log_kappa = v[0];
  h.log_tau = v[1];
  h.log_tau_e = v[2];
  const Index nk = shape.kappa_coefficients.size();
  h.kappa_coefficients = v.segment(3, nk);
  h.tau_coefficients = v.segment(3 + nk, shape.tau_coefficients.size());
  return h;
}

bool HyperParams::is_finite() const { return to_vector().allFinite(); }

double GaussianLogPrior::operator()(const HyperParams& theta) const {
  const Vector x = theta.to_vector();
  if (mean.size() != x.size() || sd.size() != x.size())
    throw InvalidArgument("GaussianLogPrior: parameter length mismatch");
  double lp = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double z = (x[i] - mean[i]) / sd[i];
    lp += -0.5 * z * z - std::log(sd[i]) - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  return lp;
}

LogPrior flat_log_prior() {
  return [](const HyperParams&) { return 0.0; };
}

void GaussianProblem::validate() const {
  if (!builder) throw InvalidArgument("GaussianProblem: missing model builder");
  if (a.rows() != y.size() || relative_precision.size() != y.size())
    throw InvalidArgument("GaussianProblem: observation dimension mismatch");
  check_noise(relative_precision, y.size());
}

double log_posterior_theta(const GaussianProblem& problem, const HyperParams& theta, const LogPrior& prior,
                           const LogPosteriorOptions& options) {
  problem.validate();
  auto reject = [&](const std::string& why) {
    if (options.warning) *options.warning = why;
    return kNegInf;
  };
  if (!theta.is_finite()) return reject("non-finite hyperparameters");
  const double lp = prior(theta);
  if (!std::isfinite(lp)) return reject("prior density is zero");
  try {
    const LatentPrior model = problem.builder(theta);
    const Vector q_e = std::exp(2.0 * theta.log_tau_e) * problem.relative_precision;
    const CholeskyFactor prior_factor = CholeskyFactor::factorize(model.q);
    const Posterior post = condition(model.q, model.mu, problem.a, problem.y, q_e);
    const Vector& u = options.evaluation_point ? *options.evaluation_point : post.mu_post;
    if (u.size() != post.size()) throw InvalidArgument("log_posterior_theta: evaluation point has wrong length");

    // The -n/2 log(2 pi) terms of p(u|theta) and p(u|y,theta) cancel and are omitted.
    const Vector du = u - model.mu;
    const double log_prior_u = 0.5 * prior_factor.log_determinant() - 0.5 * model.q.quadratic_form(du);
    const Vector r = problem.y - problem.a.multiply(u);
    const double log_lik = -0.5 * static_cast<double>(r.size()) * std::log(2.0 * std::numbers::pi) +
                           0.5 * q_e.array().log().sum() - 0.5 * (q_e.array() * r.array().square()).sum();
    const Vector dp = u - post.mu_post;
    const double log_post_u = 0.5 * post.factor.log_determinant() - 0.5 * post.q_post.quadratic_form(dp);
    const double value = lp + log_prior_u + log_lik - log_post_u;
    if (!std::isfinite(value)) return reject("non-finite log posterior");
    return value;
  } catch (const NumericalError& e) {
    return reject(e.what());
  }
}

NelderMeadResult nelder_mead_maximize(const std::function<double(const Vector&)>& f, const Vector& x0,
                                      const FitOptions& options) {
  const Index dim = x0.size();
  std::vector<Index> active;
  for (Index i = 0; i < dim; ++i)
    if (options.active.empty() || options.active.at(i)) active.push_back(i);
  if (!options.active.empty() && static_cast<Index>(options.active.size()) != dim)
    throw InvalidArgument("nelder_mead: active mask length mismatch");
  if (!x0.allFinite()) throw InvalidArgument("nelder_mead: initial point must be finite");

  NelderMeadResult res;
  auto eval = [&](const Vector& x) {
    const double v = f(x);
    res.trace.push_back({x, v});
    return std::isnan(v) ? kNegInf : v;
  };
  const Index k = static_cast<Index>(active.size());
  std::vector<Vector> pts;
  std::vector<double> vals;
  pts.push_back(x0);
  vals.push_back(eval(x0));
  for (Index j = 0; j < k; ++j) {
    Vector x = x0;
    x[active[j]] += options.initial_step;
    pts.push_back(x);
    vals.push_back(eval(x));
  }
  std::vector<std::size_t> order(pts.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
  };
  auto diameter = [&] {
    double d = 0.0;
    const Vector& best = pts[order[0]];
    for (const Vector& p : pts) d = std::max(d, (p - best).lpNorm<Eigen::Infinity>());
    return d;
  };

  sort_simplex();
  while (k > 0 && res.iterations < options.max_iterations) {
    if (std::isfinite(vals[order[0]]) && diameter() < options.tolerance) {
      res.converged = true;
      break;
    }
    ++res.iterations;
    const std::size_t worst = order.back();
    Vector centroid = Vector::Zero(dim);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(k);

    const Vector xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    const double second_worst = vals[order[order.size() - 2]];
    if (fr > vals[order[0]]) {
      const Vector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe > fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr > second_worst) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr > vals[worst];
      const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid)) : Vector(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = eval(xc);
      if (fc > (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        const Vector best = pts[order[0]];
        for (std::size_t i = 1; i < order.size(); ++i) {
          pts[order[i]] = best + 0.5 * (pts[order[i]] - best);
          vals[order[i]] = eval(pts[order[i]]);
        }
      }
    }
    sort_simplex();
  }
  if (k == 0) res.converged = true;
  if (!std::isfinite(vals[order[0]])) throw NumericalError("no feasible theta: every evaluation was rejected");
  res.x = pts[order[0]];
  res.value = vals[order[0]];
  return res;
}

FitResult fit_theta(const GaussianProblem& problem, const HyperParams& init, const LogPrior& prior,
                    const FitOptions& options) {
  problem.validate();
  if (!init.is_finite()) throw InvalidArgument("fit_theta: initial hyperparameters must be finite");
  auto objective = [&](const Vector& x) {
    return log_posterior_theta(problem, HyperParams::from_vector(x, init), prior);
  };
  NelderMeadResult nm = nelder_mead_maximize(objective, init.to_vector(), options);
  FitResult out;
  out.theta = HyperParams::from_vector(nm.x, init);
  out.log_posterior = nm.value;
  out.iterations = nm.iterations;
  out.converged = nm.converged;
  out.trace = std::move(nm.trace);
  return out;
}

}  // namespace spdekit
