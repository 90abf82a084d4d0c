#include "criteria.hpp"

#include "spdekit/spdekit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spdekit::validation {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

Check below(std::string name, double value, double bound) {
  return {std::move(name), value < bound, "value " + fmt(value) + " < " + fmt(bound)};
}

Check above(std::string name, double value, double bound) {
  return {std::move(name), value > bound, "value " + fmt(value) + " > " + fmt(bound)};
}

// Columns of Q^{-1} for the given vertices.
DenseMatrix inverse_columns(const CholeskyFactor& f, const std::vector<Index>& vertices) {
  DenseMatrix e = DenseMatrix::Zero(f.size(), static_cast<Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) e(vertices[j], static_cast<Index>(j)) = 1.0;
  return f.solve(e);
}

double distance(const Point& a, const Point& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

double great_circle(const Point& a, const Point& b) {
  const double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct ProbePairs {
  std::vector<Index> first;
  std::vector<Index> second;
};

// Vertex pairs of a (cells + 1)^2 grid with spacing `step`: the first vertex
// lies in [lo, hi]^2 and the pair distance is in (0, max_r].
ProbePairs grid_probe_pairs(Index cells, double origin, double step, double lo, double hi, double max_r, int count,
                            std::uint64_t seed) {
  const CounterRng rng(seed, streams::kLocations);
  const Index ilo = static_cast<Index>(std::ceil((lo - origin) / step - 1e-9));
  const Index ihi = static_cast<Index>(std::floor((hi - origin) / step + 1e-9));
  const Index reach = static_cast<Index>(std::floor(max_r / step + 1e-9));
  ProbePairs out;
  std::uint64_t k = 0;
  while (static_cast<int>(out.first.size()) < count) {
    const Index span = ihi - ilo + 1;
    const Index ix = ilo + static_cast<Index>(rng.uniform(k, 0, 0) * static_cast<double>(span));
    const Index iy = ilo + static_cast<Index>(rng.uniform(k, 0, 1) * static_cast<double>(span));
    const Index dx = static_cast<Index>(std::floor((2.0 * rng.uniform(k, 1, 0) - 1.0) * (reach + 1)));
    const Index dy = static_cast<Index>(std::floor((2.0 * rng.uniform(k, 1, 1) - 1.0) * (reach + 1)));
    ++k;
    const double r = step * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
    const Index jx = ix + dx;
    const Index jy = iy + dy;
    if (r <= 0.0 || r > max_r + 1e-12 || jx < ilo || jx > ihi || jy < ilo || jy > ihi) continue;
    out.first.push_back(iy * (cells + 1) + ix);
    out.second.push_back(jy * (cells + 1) + jx);
  }
  return out;
}

// Max relative covariance error over probe pairs and max relative variance error
// at the first vertices, against a stationary reference covariance.
struct PairErrors {
  double covariance = 0.0;
  double variance = 0.0;
};

template <class Cols, class Ref>
PairErrors pair_errors(const Mesh& mesh, const ProbePairs& pairs, const Cols& columns, const Ref& reference) {
  const DenseMatrix cols = columns(pairs.first);
  PairErrors e;
  for (std::size_t k = 0; k < pairs.first.size(); ++k) {
    const auto c = static_cast<Index>(k);
    const double r = distance(mesh.vertex(pairs.first[k]), mesh.vertex(pairs.second[k]));
    const double ref = reference(r);
    e.covariance = std::max(e.covariance, std::abs(cols(pairs.second[k], c) - ref) / ref);
    e.variance = std::max(e.variance, std::abs(cols(pairs.first[k], c) - reference(0.0)) / reference(0.0));
  }
  return e;
}

}  // namespace

bool Report::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string format_report(const Report& report) {
  std::ostringstream os;
  for (const Check& c : report.checks)
    os << (c.passed ? "PASS" : "FAIL") << "  [" << report.criterion << "] " << c.name << ": " << c.detail << '\n';
  os << (report.passed() ? "PASS" : "FAIL") << " criterion " << report.criterion << ": " << report.title << '\n';
  return os.str();
}

Report matern_2d() {
  Report rep{1, "Matern fidelity, 2D, alpha = 2", {}};
  const double rho = 1.0;
  const double kappa = std::sqrt(8.0) / rho;
  const double side = rho / 0.4;
  const double ext = 2.0 * rho;
  // Longest edge (the diagonal) at most rho / 10.
  const Index cells = static_cast<Index>(std::ceil((side + 2.0 * ext) / (rho / 10.0 / std::numbers::sqrt2)));
  const double step = (side + 2.0 * ext) / static_cast<double>(cells);
  const Mesh mesh = make_grid_mesh(-ext, side + ext, -ext, side + ext, cells, cells, GridDiagonal::uniform);
  const double tau = std::sqrt(oracles::matern_sigma2(kappa, 1.0, 2.0, 2));
  const FemMatrices fem = assemble_fem(mesh);
  const CholeskyFactor f = CholeskyFactor::factorize(build_precision(FieldModel::stationary(mesh, 2, kappa, tau), fem));
  const auto params = oracles::MaternParams::from_spde(kappa, tau, 2.0, 2);
  const ProbePairs pairs = grid_probe_pairs(cells, -ext, step, 0.0, side, rho, 20, 101);
  const PairErrors e = pair_errors(
      mesh, pairs, [&](const std::vector<Index>& v) { return inverse_columns(f, v); },
      [&](double r) { return oracles::matern_cov(r, params); });
  rep.checks.push_back(below("covariance relative error, 20 pairs, r <= rho", e.covariance, 0.05));
  rep.checks.push_back(below("marginal variance relative error", e.variance, 0.05));
  return rep;
}

Report neumann_1d() {
  Report rep{2, "Neumann boundary, 1D", {}};
  const double rho = 0.25;
  const double alpha = 2.0;
  const double kappa = std::sqrt(8.0 * 1.5) / rho;
  const auto params = oracles::MaternParams::from_spde(kappa, 1.0, alpha, 1);
  const int probes = 20;
  const Index per_probe = 100;

  auto fem_covariance = [&](double a, double b, double plo, double phi, std::vector<double>& x) {
    // Probe vertices are spaced per_probe segments apart.
    const double spacing = (phi - plo) / (probes - 1);
    const double h = spacing / static_cast<double>(per_probe);
    const Index before = static_cast<Index>(std::llround((plo - a) / h));
    const Index segments = static_cast<Index>(std::llround((b - a) / h));
    const Mesh mesh = make_interval_mesh(a, b, segments);
    const CholeskyFactor f =
        CholeskyFactor::factorize(build_precision(FieldModel::stationary(mesh, alpha, kappa, 1.0), assemble_fem(mesh)));
    std::vector<Index> v;
    for (int i = 0; i < probes; ++i) v.push_back(before + i * per_probe);
    const DenseMatrix cols = inverse_columns(f, v);
    DenseMatrix c(probes, probes);
    x.clear();
    for (int i = 0; i < probes; ++i) {
      x.push_back(mesh.vertex(v[i])[0]);
      for (int j = 0; j < probes; ++j) c(i, j) = cols(v[i], j);
    }
    return c;
  };

  const double length = 1.0;
  std::vector<double> x;
  const DenseMatrix c = fem_covariance(0.0, length, 0.0, length, x);
  double folded_err = 0.0, folded_max = 0.0, plain_err = 0.0;
  for (int i = 0; i < probes; ++i)
    for (int j = 0; j < probes; ++j) {
      const double ref = oracles::folded_matern_1d(x[i], x[j], params, length).value;
      folded_err = std::max(folded_err, std::abs(c(i, j) - ref));
      folded_max = std::max(folded_max, std::abs(ref));
      plain_err = std::max(plain_err, std::abs(c(i, j) - oracles::matern_cov(std::abs(x[i] - x[j]), params)));
    }
  rep.checks.push_back(below("sup error vs folded Matern / sup folded covariance, 20x20 probes",
                             folded_err / folded_max, 0.02));

  const double long_length = 8.0 * rho;
  const DenseMatrix c2 = fem_covariance(0.0, long_length, 2.0 * rho, long_length - 2.0 * rho, x);
  double interior_err = 0.0;
  for (int i = 0; i < probes; ++i)
    for (int j = 0; j < probes; ++j)
      interior_err =
          std::max(interior_err, std::abs(c2(i, j) - oracles::matern_cov(std::abs(x[i] - x[j]), params)));
  rep.checks.push_back(below("sup error vs unfolded Matern / sigma^2, probes >= 2 rho from boundary",
                             interior_err / params.sigma2, 0.01));
  rep.checks.push_back({"interior error below whole-interval error vs unfolded Matern",
                        interior_err < plain_err,
                        fmt(interior_err / params.sigma2) + " < " + fmt(plain_err / params.sigma2)});
  return rep;
}

Report sparse_vs_dense() {
  Report rep{3, "Sparse and dense conditioning agree", {}};
  const CounterRng rng(303, streams::kObservations);
  double mean_err = 0.0, var_err = 0.0, loglik_err = 0.0;
  Index max_n = 0;
  for (std::uint64_t c = 0; c < 10; ++c) {
    const Index nx = 6 + static_cast<Index>(rng.uniform(c, 0, 0) * 9);
    const Index ny = 6 + static_cast<Index>(rng.uniform(c, 0, 1) * 9);
    const Mesh mesh = make_grid_mesh(0, 1, 0, 1, nx, ny);
    const FemMatrices fem = assemble_fem(mesh);
    const double kappa = 1.0 + 9.0 * rng.uniform(c, 1, 0);
    const double tau = 0.5 + 1.5 * rng.uniform(c, 1, 1);
    const double alpha = c % 2 == 0 ? 2.0 : 1.0;
    const Index n = mesh.num_vertices();
    max_n = std::max(max_n, n);
    const Index m = 20 + static_cast<Index>(rng.uniform(c, 2, 0) * 60);
    std::vector<Point> loc;
    Vector y(m), qe(m);
    for (Index i = 0; i < m; ++i) {
      loc.push_back({rng.uniform(c, 10 + static_cast<std::uint32_t>(i), 0),
                     rng.uniform(c, 10 + static_cast<std::uint32_t>(i), 1), 0.0});
      y[i] = rng.normal(c * 1000 + static_cast<std::uint64_t>(i), 1);
      qe[i] = 0.5 + 20.0 * rng.uniform(c * 1000 + static_cast<std::uint64_t>(i), 2, 0);
    }
    Vector mu(n);
    for (Index i = 0; i < n; ++i) mu[i] = 0.3 * rng.normal(c * 1000 + static_cast<std::uint64_t>(i), 3);
    const SparseSymMatrix q = build_precision(FieldModel::stationary(mesh, alpha, kappa, tau), fem);
    const SparseMatrix a = evaluate_basis(mesh, loc).matrix;

    const Posterior post = condition(q, mu, a, y, qe);
    const Marginals marg = posterior_marginals(post);
    GaussianProblem problem{[&](const HyperParams&) { return LatentPrior{q, mu}; }, a, y, qe};
    const double lp = log_posterior_theta(problem, HyperParams{}, flat_log_prior());

    const auto ref = oracles::dense_reference(q.to_dense(), mu, a.to_dense(), y, qe);
    mean_err = std::max(mean_err, (post.mu_post - ref.mu_post).cwiseAbs().maxCoeff());
    var_err = std::max(var_err, (marg.sd.array().square().matrix() - ref.sigma_post.diagonal()).cwiseAbs().maxCoeff());
    loglik_err = std::max(loglik_err, std::abs(lp - ref.marginal_loglik));
  }
  rep.checks.push_back(below("posterior mean, max abs difference (10 cases, n <= " + std::to_string(max_n) + ")",
                             mean_err, 1e-9));
  rep.checks.push_back(below("posterior marginal variance, max abs difference", var_err, 1e-9));
  rep.checks.push_back(below("log posterior of theta vs dense marginal likelihood", loglik_err, 1e-9));
  return rep;
}

Report selected_inverse_accuracy() {
  Report rep{4, "Selected inverse matches dense inversion", {}};
  std::vector<std::pair<std::string, SparseSymMatrix>> cases;
  {
    const Mesh m = make_grid_mesh(0, 1, 0, 1, 16, 16);
    cases.emplace_back("grid 17x17, alpha 2", build_precision(FieldModel::stationary(m, 2, 6, 0.5), assemble_fem(m)));
  }
  {
    const Mesh m = make_grid_mesh(0, 2, 0, 1, 20, 10, GridDiagonal::uniform);
    cases.emplace_back("grid 21x11, alpha 1", build_precision(FieldModel::stationary(m, 1, 3, 1), assemble_fem(m)));
  }
  {
    const Mesh m = make_icosphere(2);
    cases.emplace_back("icosphere(2), alpha 2", build_precision(FieldModel::stationary(m, 2, 2, 1), assemble_fem(m)));
  }
  {
    const Mesh m = make_interval_mesh(0, 1, 299);
    cases.emplace_back("interval, 300 vertices, alpha 3",
                       build_precision(FieldModel::stationary(m, 3, 10, 1), assemble_fem(m)));
  }
  for (const auto& [name, q] : cases) {
    const SparseSymMatrix s = CholeskyFactor::factorize(q).selected_inverse();
    const DenseMatrix dense = q.to_dense().llt().solve(DenseMatrix::Identity(q.size(), q.size()));
    double err = 0.0;
    const auto cp = s.col_ptr();
    const auto ri = s.row_idx();
    const auto vals = s.values();
    for (Index j = 0; j < s.size(); ++j)
      for (Index k = cp[j]; k < cp[j + 1]; ++k) err = std::max(err, std::abs(vals[k] - dense(ri[k], j)));
    rep.checks.push_back(below(name + ", n = " + std::to_string(q.size()), err, 1e-9));
  }
  return rep;
}

Report ar1_kronecker() {
  Report rep{5, "AR(1) and Kronecker space-time", {}};
  double err = 0.0;
  for (double phi : {-0.5, 0.3, 0.9})
    for (Index t = 2; t <= 10; ++t) {
      const DenseMatrix inv = ar1_precision(phi, t).to_dense().inverse();
      for (Index i = 0; i < t; ++i)
        for (Index j = 0; j < t; ++j)
          err = std::max(err, std::abs(inv(i, j) - std::pow(phi, static_cast<double>(std::abs(i - j)))));
    }
  rep.checks.push_back(below("AR(1) inverse vs phi^|i-j|, T <= 10", err, 1e-12));

  const Mesh mesh = make_grid_mesh(0, 1, 0, 1, 6, 6);
  const FemMatrices fem = assemble_fem(mesh);
  const FieldModel spatial = FieldModel::stationary(mesh, 2, 4, 0.8);
  const SpaceTimeModel model{spatial, 5, 0.7};
  const CholeskyFactor f = CholeskyFactor::factorize(build_spacetime_precision(model, fem));
  const DenseMatrix qs_inv = build_precision(spatial, fem).to_dense().inverse();
  const Index n = mesh.num_vertices();
  double slice_err = 0.0;
  for (Index t = 0; t < model.time_steps; ++t) {
    std::vector<Index> v;
    for (Index i = 0; i < n; ++i) v.push_back(t * n + i);
    const DenseMatrix cols = inverse_columns(f, v);
    slice_err = std::max(slice_err, (cols.middleRows(t * n, n) - qs_inv).cwiseAbs().maxCoeff());
  }
  rep.checks.push_back(below("space-time slice covariance vs Q_s^-1", slice_err, 1e-9));
  return rep;
}

Report sphere_series() {
  Report rep{6, "Spherical covariance series", {}};
  const auto tail = oracles::sphere_cov_series(0.0, 1.0, 1.0, 2.0, 200);
  rep.checks.push_back(below("tail bound at k_max = 200 (kappa = tau = 1, alpha = 2)", tail.tail_bound, 1e-8));

  const double kappa = 1.0;
  const double tau = 1.0;
  const Mesh mesh = make_icosphere(3);
  const CholeskyFactor f =
      CholeskyFactor::factorize(build_precision(FieldModel::stationary(mesh, 2, kappa, tau), assemble_fem(mesh)));
  const CounterRng rng(606, streams::kLocations);
  std::vector<Index> first;
  std::vector<Index> second;
  const Index n = mesh.num_vertices();
  for (std::uint64_t k = 0; first.size() < 20; ++k) {
    const Index i = static_cast<Index>(rng.uniform(k, 0, 0) * static_cast<double>(n));
    const Index j = static_cast<Index>(rng.uniform(k, 0, 1) * static_cast<double>(n));
    if (great_circle(mesh.vertex(i), mesh.vertex(j)) > 0.5) continue;
    first.push_back(i);
    second.push_back(j);
  }
  const DenseMatrix cols = inverse_columns(f, first);
  double err = 0.0;
  for (std::size_t k = 0; k < first.size(); ++k) {
    const double angle = great_circle(mesh.vertex(first[k]), mesh.vertex(second[k]));
    const double ref = oracles::sphere_cov_series(angle, kappa, tau, 2.0, 2000).value;
    err = std::max(err, std::abs(cols(second[k], static_cast<Index>(k)) - ref) / ref);
  }
  rep.checks.push_back(below("FEM vs series on icosphere(3), 20 pairs, angle <= 0.5", err, 0.05));
  return rep;
}

Report fractional_exponential() {
  Report rep{7, "Fractional alpha = 1.5 in 2D", {}};
  const double rho = 1.0;
  const double kappa = std::sqrt(8.0 * 0.5) / rho;
  const double side = rho / 0.4;
  const double ext = 2.0 * rho;
  const Index cells = static_cast<Index>(std::ceil((side + 2.0 * ext) / (rho / 10.0 / std::numbers::sqrt2)));
  const double step = (side + 2.0 * ext) / static_cast<double>(cells);
  const Mesh mesh = make_grid_mesh(-ext, side + ext, -ext, side + ext, cells, cells, GridDiagonal::uniform);
  const FemMatrices fem = assemble_fem(mesh);
  const double tau = std::sqrt(oracles::matern_sigma2(kappa, 1.0, 1.5, 2));
  const auto params = oracles::MaternParams::from_spde(kappa, tau, 1.5, 2);
  const ProbePairs pairs = grid_probe_pairs(cells, -ext, step, 0.0, side, rho, 20, 707);
  auto reference = [&](double r) { return params.sigma2 * std::exp(-kappa * r); };
  std::vector<double> errors;
  for (int m = 1; m <= 4; ++m) {
    const RationalOperator op = build_fractional(FieldModel::stationary(mesh, 1.5, kappa, tau), fem, m);
    const PairErrors e = pair_errors(
        mesh, pairs, [&](const std::vector<Index>& v) { return op.covariance_columns(v); }, reference);
    errors.push_back(std::max(e.covariance, e.variance));
  }
  rep.checks.push_back(below("m = 4, max relative error vs exponential covariance, 20 pairs and variances",
                             errors.back(), 0.05));
  bool monotone = true;
  std::string seq;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    seq += (i ? ", " : "") + fmt(errors[i]);
    if (i > 0 && !(errors[i] < errors[i - 1])) monotone = false;
  }
  rep.checks.push_back({"error strictly decreasing over m = 1..4", monotone, seq});
  return rep;
}

Report hyperparameter_recovery() {
  Report rep{8, "Hyperparameter recovery", {}};
  const double kappa = std::sqrt(8.0) / 0.3;
  const double sigma2 = 1.0;
  const double tau = std::sqrt(oracles::matern_sigma2(kappa, 1.0, 2.0, 2) / sigma2);
  const double tau_e = 5.0;
  const Mesh mesh = make_grid_mesh(0, 1, 0, 1, 24, 24);
  const FemMatrices fem = assemble_fem(mesh);
  const CholeskyFactor truth =
      CholeskyFactor::factorize(build_precision(FieldModel::stationary(mesh, 2, kappa, tau), fem));
  const Index m = 500;
  const int replicates = 20;
  std::vector<double> k_hat, s_hat, te_hat;
  for (int r = 0; r < replicates; ++r) {
    const std::uint64_t seed = CounterRng::derive_seed(808, static_cast<std::uint64_t>(r));
    const CounterRng loc_rng(seed, streams::kLocations);
    const CounterRng obs_rng(seed, streams::kObservations);
    std::vector<Point> loc;
    for (Index i = 0; i < m; ++i)
      loc.push_back({loc_rng.uniform(static_cast<std::uint64_t>(i), 0, 0),
                     loc_rng.uniform(static_cast<std::uint64_t>(i), 0, 1), 0.0});
    const SparseMatrix a = evaluate_basis(mesh, loc).matrix;
    Vector y = a.multiply(truth.sample(seed));
    for (Index i = 0; i < m; ++i) y[i] += obs_rng.normal(static_cast<std::uint64_t>(i)) / tau_e;

    GaussianProblem problem{[&](const HyperParams& th) {
                              return LatentPrior{build_precision(FieldModel::stationary(mesh, 2, std::exp(th.log_kappa),
                                                                                        std::exp(th.log_tau)),
                                                                 fem),
                                                 Vector::Zero(mesh.num_vertices())};
                            },
                            a, y, Vector::Ones(m)};
    HyperParams init;
    init.log_kappa = std::log(kappa * 1.5);
    init.log_tau = std::log(tau * 0.7);
    init.log_tau_e = std::log(tau_e * 0.5);
    FitOptions opt;
    opt.tolerance = 1e-5;
    const FitResult fit = fit_theta(problem, init, flat_log_prior(), opt);
    k_hat.push_back(std::exp(fit.theta.log_kappa));
    s_hat.push_back(oracles::matern_sigma2(k_hat.back(), std::exp(fit.theta.log_tau), 2.0, 2));
    te_hat.push_back(std::exp(fit.theta.log_tau_e));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  };
  rep.checks.push_back(below("median kappa relative error (20 replicates, 500 obs)",
                             std::abs(median(k_hat) / kappa - 1.0), 0.30));
  rep.checks.push_back(below("median sigma^2 relative error", std::abs(median(s_hat) / sigma2 - 1.0), 0.30));
  rep.checks.push_back(below("median tau_e relative error", std::abs(median(te_hat) / tau_e - 1.0), 0.10));
  return rep;
}

Report lgcp_checks() {
  Report rep{9, "Log-Gaussian Cox process", {}};
  {
    const Mesh mesh = make_grid_mesh(0, 1, 0, 1, 60, 60);
    auto eta_fn = [](double x, double y) { return 1.0 + std::sin(2.0 * x) * std::cos(1.5 * y) + 0.5 * x * y; };
    Vector eta(mesh.num_vertices());
    for (Index i = 0; i < eta.size(); ++i) eta[i] = eta_fn(mesh.vertex(i)[0], mesh.vertex(i)[1]);
    const double discrete = -lgcp_loglik(eta, mesh, {});
    // Composite Simpson rule on a 400 x 400 grid.
    const int n = 400;
    const double h = 1.0 / n;
    double fine = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double wi = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double wj = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        fine += wi * wj * std::exp(eta_fn(i * h, j * h));
      }
    fine *= h * h / 9.0;
    rep.checks.push_back(below("integral term relative error vs fine quadrature", std::abs(discrete / fine - 1.0), 1e-3));
  }
  {
    const Mesh mesh = make_grid_mesh(0, 2, 0, 1, 20, 10);
    const Index n = mesh.num_vertices();
    const PointPattern pattern = simulate_lgcp(Vector::Constant(n, std::log(400.0)), mesh, 909);
    const FemMatrices fem = assemble_fem(mesh);
    const SparseSymMatrix q = fem.g.scaled(1e6) + SparseSymMatrix::identity(n).scaled(1e-8);
    const LgcpFit fit = lgcp_fit_eta(q, Vector::Zero(n), mesh, pattern);
    const double target = std::log(static_cast<double>(pattern.size()) / mesh.total_measure());
    rep.checks.push_back(below("homogeneous fit vs log(M/|D|), max over vertices",
                               (fit.mode.array() - target).abs().maxCoeff(), 1e-3));
  }
  {
    const Mesh mesh = make_grid_mesh(0, 1, 0, 1, 8, 8);
    const Index n = mesh.num_vertices();
    Vector eta(n);
    for (Index i = 0; i < n; ++i) eta[i] = 2.0 + std::sin(3.0 * mesh.vertex(i)[0] + mesh.vertex(i)[1]);
    const PointPattern pattern = simulate_lgcp(eta, mesh, 910);
    const LgcpLikelihood lik(mesh, pattern);
    const Vector g = lik.gradient(eta);
    const Vector hd = lik.hessian_diagonal(eta);
    const double eps = 1e-5;
    double g_err = 0.0, h_err = 0.0;
    for (Index i = 0; i < n; ++i) {
      Vector ep = eta, em = eta;
      ep[i] += eps;
      em[i] -= eps;
      const double fd_g = (lik.value(ep) - lik.value(em)) / (2 * eps);
      const Vector fd_h = (lik.gradient(ep) - lik.gradient(em)) / (2 * eps);
      g_err = std::max(g_err, std::abs(fd_g - g[i]) / std::max(1.0, std::abs(g[i])));
      for (Index j = 0; j < n; ++j) {
        const double exact = j == i ? hd[i] : 0.0;
        h_err = std::max(h_err, std::abs(fd_h[j] - exact) / std::max(1.0, std::abs(exact)));
      }
    }
    rep.checks.push_back(below("gradient vs central differences (relative)", g_err, 1e-6));
    rep.checks.push_back(below("Hessian vs central differences (relative)", h_err, 1e-6));
  }
  return rep;
}

Report type_g_limit() {
  Report rep{10, "Type-G Gaussian limit and tails", {}};
  const Mesh mesh = make_grid_mesh(0, 1, 0, 2, 4, 9);
  const FemMatrices fem = assemble_fem(mesh);
  const double kappa = 4.0;
  const double tau = 0.5;
  const Index n = mesh.num_vertices();
  const int samples = 10000;

  TypeGNoise limit;
  limit.family = MixingFamily::nig;
  limit.nig_shape = 1e10;
  const TypeGSampler sampler(TypeGField{build_operator(Vector::Constant(n, kappa), fem), tau, fem.c_lumped, limit});
  DenseMatrix acc = DenseMatrix::Zero(n, n);
  for (int s = 0; s < samples; ++s) {
    const Vector u = sampler.sample(CounterRng::derive_seed(1010, static_cast<std::uint64_t>(s)));
    acc += u * u.transpose();
  }
  acc /= samples;
  const DenseMatrix gaussian =
      build_precision(FieldModel::stationary(mesh, 2, kappa, tau), fem).to_dense().inverse();
  rep.checks.push_back(below("relative Frobenius error of empirical covariance (n = " + std::to_string(n) +
                                 ", 10^4 samples)",
                             (acc - gaussian).norm() / gaussian.norm(), 0.03));

  TypeGNoise heavy;
  heavy.family = MixingFamily::nig;
  heavy.nig_shape = 0.5;
  const TypeGSampler heavy_sampler(TypeGField{build_operator(Vector::Constant(n, kappa), fem), tau, fem.c_lumped, heavy});
  const Index probe = n / 2;
  Vector x(samples);
  for (int s = 0; s < samples; ++s)
    x[s] = heavy_sampler.sample(CounterRng::derive_seed(1011, static_cast<std::uint64_t>(s)))[probe];
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  const double kurt = (x.array() - mean).pow(4).mean() / (var * var) - 3.0;
  rep.checks.push_back(above("excess kurtosis, NIG shape 0.5", kurt, 0.0));
  return rep;
}

Report run_suite(const Suite& suite) {
  try {
    return suite.run();
  } catch (const std::exception& e) {
    return Report{suite.criterion, suite.title, {Check{"suite raised an exception", false, e.what()}}};
  }
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"matern2d", 1, "Matern fidelity, 2D, alpha = 2", matern_2d},
      {"neumann1d", 2, "Neumann boundary, 1D", neumann_1d},
      {"sparse-dense", 3, "Sparse and dense conditioning agree", sparse_vs_dense},
      {"takahashi", 4, "Selected inverse matches dense inversion", selected_inverse_accuracy},
      {"kronecker", 5, "AR(1) and Kronecker space-time", ar1_kronecker},
      {"sphere", 6, "Spherical covariance series", sphere_series},
      {"fractional", 7, "Fractional alpha = 1.5 in 2D", fractional_exponential},
      {"recovery", 8, "Hyperparameter recovery", hyperparameter_recovery},
      {"lgcp", 9, "Log-Gaussian Cox process", lgcp_checks},
      {"typeg", 10, "Type-G Gaussian limit and tails", type_g_limit},
  };
  return all;
}

}  // namespace spdekit::validation
