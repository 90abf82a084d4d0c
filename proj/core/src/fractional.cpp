#include "spdekit/fractional.hpp"

#include "spdekit/cholesky.hpp"
#include "spdekit/error.hpp"
#include "spdekit/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>

namespace spdekit {

namespace {

constexpr int kFitGridSize = 2000;
constexpr int kRescaleIterations = 30;
constexpr int kLawsonIterations = 300;
// Roots with a smaller imaginary part (relative to their modulus) are treated as real.
constexpr double kRealRootTol = 1e-10;
// A fit is rejected when its relative error exceeds this.
constexpr double kMaxAcceptableError = 0.5;

double poly_value(const std::vector<std::complex<double>>& roots, double scale, double x) {
  std::complex<double> v(scale, 0.0);
  for (const auto& r : roots) v *= x - r;
  return v.real();
}

Vector log_grid(double lo, double hi, int n) {
  Vector x(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) x[i] = std::exp(a + (b - a) * i / (n - 1));
  x[0] = lo;
  x[n - 1] = hi;
  return x;
}

// Rows T_0(s)..T_m(s).
DenseMatrix chebyshev_basis(const Vector& s, int m) {
  DenseMatrix t(s.size(), m + 1);
  for (Index i = 0; i < s.size(); ++i) {
    t(i, 0) = 1.0;
    if (m >= 1) t(i, 1) = s[i];
    for (int k = 2; k <= m; ++k) t(i, k) = 2.0 * s[i] * t(i, k - 1) - t(i, k - 2);
  }
  return t;
}

// Roots in x and leading coefficient of sum_k c_k T_k(s(x)), s(x) = (2x - lo - hi) / (hi - lo).
void chebyshev_to_roots(const Vector& c, double lo, double hi, std::vector<std::complex<double>>& roots,
                        double& scale) {
  int deg = static_cast<int>(c.size()) - 1;
  const double cmax = c.cwiseAbs().maxCoeff();
  while (deg > 0 && std::abs(c[deg]) <= 1e-14 * cmax) --deg;
  roots.clear();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  if (deg == 0) {
    scale = c[0];
    return;
  }
  std::vector<std::complex<double>> s_roots;
  if (deg == 1) {
    s_roots.emplace_back(-c[0] / c[1], 0.0);
  } else {
    // Colleague matrix.
    DenseMatrix a = DenseMatrix::Zero(deg, deg);
    a(0, 1) = 1.0;
    for (int k = 1; k < deg; ++k) {
      a(k, k - 1) = 0.5;
      if (k + 1 < deg) a(k, k + 1) = 0.5;
    }
    for (int j = 0; j < deg; ++j) a(deg - 1, j) -= c[j] / (2.0 * c[deg]);
    const Eigen::EigenSolver<DenseMatrix> es(a, false);
    for (Index k = 0; k < es.eigenvalues().size(); ++k) s_roots.push_back(es.eigenvalues()[k]);
  }
  for (auto s : s_roots) {
    std::complex<double> x = half * s + mid;
    if (std::abs(x.imag()) <= kRealRootTol * std::abs(x)) x = {x.real(), 0.0};
    roots.push_back(x);
  }
  scale = c[deg] * std::pow(2.0, deg - 1) * std::pow(1.0 / half, deg);
}

// scale * prod over roots of (m - r I), complex pairs as real quadratics.
SparseMatrix matrix_polynomial(const SparseMatrix& m, const std::vector<std::complex<double>>& roots, double scale) {
  const Index n = m.rows();
  const SparseMatrix eye = SparseMatrix::identity(n);
  SparseMatrix out = scale * eye;
  for (const auto& r : roots) {
    if (r.imag() == 0.0) {
      out = out * (m + (-r.real()) * eye);
    } else if (r.imag() > 0.0) {
      const SparseMatrix quad = m * m + (-2.0 * r.real()) * m + std::norm(r) * eye;
      out = out * quad;
    }
  }
  return out;
}

bool has_root_in(const std::vector<std::complex<double>>& roots, double lo, double hi) {
  for (const auto& r : roots)
    if (r.imag() == 0.0 && r.real() >= lo && r.real() <= hi) return true;
  return false;
}

}  // namespace

double RationalFunction::numerator(double x) const { return poly_value(numerator_roots, numerator_scale, x); }

double RationalFunction::denominator(double x) const {
  return poly_value(denominator_roots, denominator_scale, x);
}

double rational_sup_error(const RationalFunction& r, double exponent, double lo, double hi, int grid) {
  const Vector x = log_grid(lo, hi, grid);
  double err = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double e = std::abs(r(x[i]) / std::pow(x[i], exponent) - 1.0);
    if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
    err = std::max(err, e);
  }
  return err;
}

RationalFit rational_fit(double alpha_frac, double lo, double hi, int order) {
  if (!(alpha_frac > 0.0 && alpha_frac < 1.0))
    throw InvalidArgument("rational_fit: the fractional part must lie strictly between 0 and 1");
  if (!(lo > 0.0 && lo < hi) || !std::isfinite(hi)) throw InvalidArgument("rational_fit: need 0 < lo < hi");
  if (order < 1 || order > kMaxRationalOrder) throw InvalidArgument("rational_fit: order must be in 1..8");

  const double beta = 0.5 * alpha_frac;
  const Vector x = log_grid(lo, hi, kFitGridSize);
  const Vector f = x.array().pow(beta).matrix();
  const Vector s = ((2.0 * x.array() - lo - hi) / (hi - lo)).matrix();
  const DenseMatrix t = chebyshev_basis(s, order);
  const Index n = x.size();
  const int nc = order + 1;

  Vector q_prev = Vector::Ones(n);
  Vector weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
  RationalFit best;
  best.sup_error = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (int it = 0; it < kRescaleIterations + kLawsonIterations; ++it) {
    ++iterations;
    DenseMatrix a(n, 2 * nc);
    for (Index i = 0; i < n; ++i) {
      const double row_scale = std::sqrt(weights[i]) / (f[i] * std::abs(q_prev[i]));
      a.block(i, 0, 1, nc) = row_scale * t.row(i);
      a.block(i, nc, 1, nc) = -row_scale * f[i] * t.row(i);
    }
    const Eigen::JacobiSVD<DenseMatrix> svd(a, Eigen::ComputeThinV);
    const Vector c = svd.matrixV().col(2 * nc - 1);
    const Vector p_vals = t * c.head(nc);
    const Vector q_vals = t * c.tail(nc);
    if (!(q_vals.array().abs() > 0.0).all()) break;
    const Vector rel = (p_vals.array() / (q_vals.array() * f.array()) - 1.0).matrix();
    q_prev = q_vals / q_vals.cwiseAbs().maxCoeff();

    RationalFunction r;
    chebyshev_to_roots(c.head(nc), lo, hi, r.numerator_roots, r.numerator_scale);
    chebyshev_to_roots(c.tail(nc), lo, hi, r.denominator_roots, r.denominator_scale);
    if (!has_root_in(r.denominator_roots, lo, hi)) {
      const double err = rational_sup_error(r, beta, lo, hi);
      if (err < best.sup_error) {
        best.r = std::move(r);
        best.sup_error = err;
      }
    }
    if (it >= kRescaleIterations) {
      weights = weights.cwiseProduct(rel.cwiseAbs());
      const double total = weights.sum();
      if (!(total > 0.0) || !std::isfinite(total)) break;
      weights /= total;
    }
  }
  if (!(best.sup_error <= kMaxAcceptableError)) {
    std::ostringstream msg;
    msg << "rational_fit: no convergence for order " << order << " on [" << lo << ", " << hi
        << "] (best relative error " << best.sup_error << " after " << iterations << " iterations)";
    throw NumericalError(msg.str());
  }
  best.order = order;
  best.exponent = beta;
  best.lo = lo;
  best.hi = hi;
  best.iterations = iterations;
  return best;
}

SpectralInterval estimate_spectral_interval(const Vector& kappa, const FemMatrices& fem) {
  const SparseSymMatrix k = build_operator(kappa, fem);
  const Vector cinv = fem.c_lumped.cwiseInverse();
  SpectralInterval out;
  out.lo = kappa.array().square().minCoeff();

  const SparseMatrix m = k.to_general().scaled(cinv, Vector());
  for (Index i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (double v : m.row_values(i)) row += std::abs(v);
    out.gershgorin_bound = std::max(out.gershgorin_bound, row);
  }

  const CounterRng rng(0x5eed, streams::kGmrf);
  Vector x(m.rows());
  for (Index i = 0; i < x.size(); ++i) x[i] = rng.normal(static_cast<std::uint64_t>(i));
  for (int it = 0; it < kPowerIterations; ++it) {
    x = m.multiply(x);
    x /= x.norm();
  }
  // Rayleigh quotient in the C inner product, where M is self-adjoint.
  const Vector cx = fem.c_lumped.cwiseProduct(x);
  out.power_estimate = k.quadratic_form(x) / x.dot(cx);
  out.hi = std::min(kSpectralSafety * out.power_estimate, out.gershgorin_bound);
  if (!(out.hi > out.lo)) out.hi = out.gershgorin_bound;
  if (!(out.hi > out.lo)) throw NumericalError("spectral interval estimation failed");
  return out;
}

namespace {

// Solves with Q_x through its factors.
class FactoredSolver {
 public:
  explicit FactoredSolver(const RationalOperator& op) : op_(op), b_(CholeskyFactor::factorize(op.integer_part)) {
    for (const auto& f : op.root_factors) roots_.push_back(CholeskyFactor::factorize(f));
  }

  // p(M~)^{-1} x.
  DenseMatrix apply_inverse(DenseMatrix x) const {
    for (const auto& r : roots_) x = r.solve(DenseMatrix(op_.c_lumped.asDiagonal() * x));
    return x / op_.numerator_scale;
  }
  // p(M~)^{-T} x.
  DenseMatrix apply_inverse_transpose(DenseMatrix x) const {
    for (const auto& r : roots_) x = op_.c_lumped.asDiagonal() * r.solve(x);
    return x / op_.numerator_scale;
  }
  DenseMatrix solve(const DenseMatrix& x) const { return apply_inverse(b_.solve(apply_inverse_transpose(x))); }
  Vector sample(std::uint64_t seed) const { return apply_inverse(b_.sample(seed)); }

 private:
  const RationalOperator& op_;
  CholeskyFactor b_;
  std::vector<CholeskyFactor> roots_;
};

}  // namespace

DenseMatrix RationalOperator::covariance() const {
  const FactoredSolver f(*this);
  const DenseMatrix pd = p.to_dense();
  const DenseMatrix c = pd * f.solve(DenseMatrix(pd.transpose()));
  return 0.5 * (c + c.transpose());
}

DenseMatrix RationalOperator::covariance_columns(const std::vector<Index>& vertices) const {
  const FactoredSolver f(*this);
  const SparseMatrix pt = p.transpose();
  DenseMatrix rhs(p.cols(), static_cast<Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    Vector e = Vector::Zero(p.rows());
    e[vertices[j]] = 1.0;
    rhs.col(static_cast<Index>(j)) = pt.multiply(e);
  }
  const DenseMatrix w = f.solve(rhs);
  DenseMatrix out(p.rows(), w.cols());
  for (Index j = 0; j < w.cols(); ++j) out.col(j) = p.multiply(w.col(j));
  return out;
}

Vector RationalOperator::sample(std::uint64_t seed) const { return p.multiply(FactoredSolver(*this).sample(seed)); }

RationalOperator build_fractional(const FieldModel& model, const FemMatrices& fem, int order) {
  model.validate();
  if (model.size() != fem.size()) throw InvalidArgument("build_fractional: dimension mismatch with FEM matrices");
  if (!(model.alpha > 0.5 * model.dimension))
    throw InvalidArgument("build_fractional: alpha must exceed d/2");
  RationalOperator out;
  out.order = order;
  out.experimental = !model.is_stationary();
  const double n_int = std::floor(model.alpha);
  const double frac = model.alpha - n_int;
  if (frac == 0.0) {
    out.p = SparseMatrix::identity(model.size());
    out.q_x = build_precision(model, fem);
    out.integer_part = out.q_x;
    out.c_lumped = fem.c_lumped;
    out.order = 0;
    return out;
  }
  if (n_int > kMaxIntegerAlpha) throw InvalidArgument("build_fractional: alpha must be below 5");

  out.interval = estimate_spectral_interval(model.kappa, fem);
  const double hi = out.interval.hi;
  out.fit = rational_fit(frac, out.interval.lo / hi, 1.0, order);
  const RationalFunction& r = out.fit.r;
  if (has_root_in(r.numerator_roots, out.interval.lo / hi, 1.0))
    throw NumericalError("build_fractional: numerator root inside the spectral interval");

  const SparseMatrix k = build_operator(model.kappa, fem).to_general();
  const SparseMatrix m = k.scaled(fem.c_lumped.cwiseInverse(), Vector());
  const SparseMatrix m_scaled = (1.0 / hi) * m;
  const SparseMatrix p_num = matrix_polynomial(m_scaled, r.numerator_roots, r.numerator_scale);
  const SparseMatrix p_den = matrix_polynomial(m_scaled, r.denominator_roots, r.denominator_scale);

  SparseMatrix inner = p_num;
  for (int a = 0; a < static_cast<int>(n_int); ++a) inner = inner * m;
  inner = inner * p_num;
  out.q_x = SparseSymMatrix::from_general(inner.scaled(fem.c_lumped, Vector()));

  SparseMatrix b = SparseMatrix::diagonal(fem.c_lumped);
  for (int a = 0; a < static_cast<int>(n_int); ++a) b = b * m;
  out.integer_part = SparseSymMatrix::from_general(b);
  out.c_lumped = fem.c_lumped;
  out.numerator_scale = r.numerator_scale;
  const SparseMatrix k_scaled = (1.0 / hi) * k;
  const SparseMatrix c = SparseMatrix::diagonal(fem.c_lumped);
  const SparseMatrix kck = k_scaled * k_scaled.scaled(fem.c_lumped.cwiseInverse(), Vector());
  for (const auto& root : r.numerator_roots) {
    if (root.imag() == 0.0) {
      out.root_factors.push_back(SparseSymMatrix::from_general(k_scaled + (-root.real()) * c));
    } else if (root.imag() > 0.0) {
      out.root_factors.push_back(
          SparseSymMatrix::from_general(kck + (-2.0 * root.real()) * k_scaled + std::norm(root) * c));
    }
  }
  out.p = p_den.scaled(model.tau.cwiseInverse() * std::pow(hi, -0.5 * frac), Vector());
  return out;
}

}  // namespace spdekit
