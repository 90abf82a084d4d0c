#include "spdekit/cholesky.hpp"

#include "spdekit/error.hpp"
#include "spdekit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace spdekit {

namespace {

// Upper triangle of P Q P' in compressed column layout (row <= col).
struct UpperPattern {
  std::vector<Index> cp;
  std::vector<Index> ri;
  std::vector<double> vx;
};

UpperPattern permuted_upper(const SparseSymMatrix& q, const std::vector<Index>& pinv) {
  const Index n = q.size();
  const auto qcp = q.col_ptr();
  const auto qri = q.row_idx();
  const auto qv = q.values();
  UpperPattern u;
  u.cp.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index j = 0; j < n; ++j)
    for (Index p = qcp[j]; p < qcp[j + 1]; ++p)
      ++u.cp[std::max(pinv[qri[p]], pinv[j]) + 1];
  for (Index k = 0; k < n; ++k) u.cp[k + 1] += u.cp[k];
  std::vector<Index> next(u.cp.begin(), u.cp.end() - 1);
  u.ri.resize(static_cast<std::size_t>(q.nnz()));
  u.vx.resize(static_cast<std::size_t>(q.nnz()));
  for (Index j = 0; j < n; ++j) {
    for (Index p = qcp[j]; p < qcp[j + 1]; ++p) {
      const Index a = pinv[qri[p]];
      const Index b = pinv[j];
      const Index dst = next[std::max(a, b)]++;
      u.ri[dst] = std::min(a, b);
      u.vx[dst] = qv[p];
    }
  }
  return u;
}

std::vector<Index> elimination_tree(const UpperPattern& u, Index n) {
  std::vector<Index> parent(n, -1), ancestor(n, -1);
  for (Index k = 0; k < n; ++k) {
    for (Index p = u.cp[k]; p < u.cp[k + 1]; ++p) {
      Index i = u.ri[p];
      while (i != -1 && i < k) {
        const Index inext = ancestor[i];
        ancestor[i] = k;
        if (inext == -1) parent[i] = k;
        i = inext;
      }
    }
  }
  return parent;
}

// Nonzero pattern of row k of L (excluding the diagonal), in topological
// order, written to stack[top..n). Returns top.
Index row_reach(const UpperPattern& u, Index k, const std::vector<Index>& parent,
                std::vector<Index>& stack, std::vector<Index>& flag) {
  const Index n = static_cast<Index>(parent.size());
  Index top = n;
  flag[k] = k;
  for (Index p = u.cp[k]; p < u.cp[k + 1]; ++p) {
    Index i = u.ri[p];
    if (i > k) continue;
    Index len = 0;
    for (; flag[i] != k; i = parent[i]) {
      stack[len++] = i;
      flag[i] = k;
    }
    while (len > 0) stack[--top] = stack[--len];
  }
  return top;
}

}  // namespace

CholeskyFactor CholeskyFactor::factorize(const SparseSymMatrix& q, Ordering ordering) {
  CholeskyFactor f;
  const Index n = q.size();
  f.n_ = n;
  f.nnz_q_ = q.nnz();
  f.perm_ = compute_ordering(q, ordering);
  f.pinv_ = invert_permutation(f.perm_);
  const UpperPattern u = permuted_upper(q, f.pinv_);
  const std::vector<Index> parent = elimination_tree(u, n);

  std::vector<Index> stack(n), flag(n, -1), counts(n, 1);
  for (Index k = 0; k < n; ++k) {
    const Index top = row_reach(u, k, parent, stack, flag);
    for (Index t = top; t < n; ++t) ++counts[stack[t]];
  }
  f.lp_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index k = 0; k < n; ++k) f.lp_[k + 1] = f.lp_[k] + counts[k];
  f.li_.resize(static_cast<std::size_t>(f.lp_[n]));
  f.lx_.resize(static_cast<std::size_t>(f.lp_[n]));

  // Up-looking numeric factorisation; next[i] is the fill position of column i.
  std::vector<Index> next(f.lp_.begin(), f.lp_.end() - 1);
  std::vector<double> x(n, 0.0);
  std::fill(flag.begin(), flag.end(), -1);
  double logdet = 0.0;
  for (Index k = 0; k < n; ++k) {
    const Index top = row_reach(u, k, parent, stack, flag);
    x[k] = 0.0;
    for (Index p = u.cp[k]; p < u.cp[k + 1]; ++p) x[u.ri[p]] += u.vx[p];
    double d = x[k];
    x[k] = 0.0;
    for (Index t = top; t < n; ++t) {
      const Index i = stack[t];
      const double lki = x[i] / f.lx_[f.lp_[i]];
      x[i] = 0.0;
      for (Index p = f.lp_[i] + 1; p < next[i]; ++p) x[f.li_[p]] -= f.lx_[p] * lki;
      d -= lki * lki;
      const Index p = next[i]++;
      f.li_[p] = k;
      f.lx_[p] = lki;
    }
    if (!(d > 0.0) || !std::isfinite(d)) throw NotPositiveDefinite(f.perm_[k]);
    const Index p = next[k]++;
    f.li_[p] = k;
    f.lx_[p] = std::sqrt(d);
    logdet += std::log(d);
  }
  f.logdet_ = logdet;
  return f;
}

FactorStats CholeskyFactor::stats() const {
  FactorStats s;
  s.n = n_;
  s.nnz_q = nnz_q_;
  s.nnz_l = nnz();
  s.fill_ratio = nnz_q_ > 0 ? static_cast<double>(s.nnz_l) / static_cast<double>(nnz_q_) : 0.0;
  s.log_determinant = logdet_;
  return s;
}

void write_stats(std::ostream& os, const FactorStats& s) {
  const auto old = os.precision(17);
  os << "n=" << s.n << "\n"
     << "nnz_q=" << s.nnz_q << "\n"
     << "nnz_l=" << s.nnz_l << "\n"
     << "fill_ratio=" << s.fill_ratio << "\n"
     << "logdet=" << s.log_determinant << "\n";
  os.precision(old);
}

void CholeskyFactor::lower_solve_in_place(Vector& x) const {
  for (Index j = 0; j < n_; ++j) {
    x[j] /= lx_[lp_[j]];
    const double xj = x[j];
    for (Index p = lp_[j] + 1; p < lp_[j + 1]; ++p) x[li_[p]] -= lx_[p] * xj;
  }
}

void CholeskyFactor::upper_solve_in_place(Vector& x) const {
  for (Index j = n_ - 1; j >= 0; --j) {
    double s = x[j];
    for (Index p = lp_[j] + 1; p < lp_[j + 1]; ++p) s -= lx_[p] * x[li_[p]];
    x[j] = s / lx_[lp_[j]];
  }
}

Vector CholeskyFactor::solve(const Vector& b) const {
  if (b.size() != n_) throw InvalidArgument("solve: dimension mismatch");
  Vector y(n_);
  for (Index k = 0; k < n_; ++k) y[k] = b[perm_[k]];
  lower_solve_in_place(y);
  upper_solve_in_place(y);
  Vector x(n_);
  for (Index k = 0; k < n_; ++k) x[perm_[k]] = y[k];
  return x;
}

DenseMatrix CholeskyFactor::solve(const DenseMatrix& b) const {
  if (b.rows() != n_) throw InvalidArgument("solve: dimension mismatch");
  DenseMatrix out(b.rows(), b.cols());
  for (Index c = 0; c < b.cols(); ++c) out.col(c) = solve(Vector(b.col(c)));
  return out;
}

Vector CholeskyFactor::apply_inverse_root(const Vector& z) const {
  if (z.size() != n_) throw InvalidArgument("apply_inverse_root: dimension mismatch");
  Vector y = z;
  upper_solve_in_place(y);
  Vector x(n_);
  for (Index k = 0; k < n_; ++k) x[perm_[k]] = y[k];
  return x;
}

Vector CholeskyFactor::sample(std::uint64_t seed) const {
  const CounterRng rng(seed, streams::kGmrf);
  Vector z(n_);
  for (Index k = 0; k < n_; ++k) z[k] = rng.normal(static_cast<std::uint64_t>(k));
  return apply_inverse_root(z);
}

SparseSymMatrix CholeskyFactor::selected_inverse() const {
  // Takahashi recursion over the columns of L in reverse order:
  //   Z(i,j) = delta_ij / L_jj^2 - (1/L_jj) sum_{k in struct(L_{:,j}), k > j} L_kj Z(k,i)
  std::vector<double> z(lx_.size(), 0.0);
  auto lookup = [&](Index r, Index c) {
    if (r < c) std::swap(r, c);
    const auto first = li_.begin() + lp_[c];
    const auto last = li_.begin() + lp_[c + 1];
    const auto it = std::lower_bound(first, last, r);
    if (it == last || *it != r) throw NumericalError("selected_inverse: pattern is not closed");
    return z[static_cast<std::size_t>(it - li_.begin())];
  };
  for (Index j = n_ - 1; j >= 0; --j) {
    const Index beg = lp_[j];
    const Index end = lp_[j + 1];
    const double ljj = lx_[beg];
    for (Index pi = end - 1; pi > beg; --pi) {
      const Index i = li_[pi];
      double s = 0.0;
      Index pk = beg + 1;
      for (; pk < end && li_[pk] < i; ++pk) s += lx_[pk] * lookup(li_[pk], i);
      // Rows k >= i of column j are a subset of column i's rows, so merge.
      for (Index q = lp_[i]; pk < end; ++pk) {
        while (li_[q] < li_[pk]) ++q;
        s += lx_[pk] * z[q];
      }
      z[pi] = -s / ljj;
    }
    double s = 0.0;
    for (Index pk = beg + 1; pk < end; ++pk) s += lx_[pk] * z[pk];
    z[beg] = 1.0 / (ljj * ljj) - s / ljj;
  }
  std::vector<Triplet> t;
  t.reserve(z.size());
  for (Index j = 0; j < n_; ++j)
    for (Index p = lp_[j]; p < lp_[j + 1]; ++p) t.push_back({perm_[li_[p]], perm_[j], z[p]});
  return SparseSymMatrix::from_triplets(n_, t);
}

DenseMatrix CholeskyFactor::lower_dense() const {
  DenseMatrix l = DenseMatrix::Zero(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index p = lp_[j]; p < lp_[j + 1]; ++p) l(li_[p], j) = lx_[p];
  return l;
}

}  // namespace spdekit
