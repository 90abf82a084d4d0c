#pragma once

#include "spdekit/ordering.hpp"
#include "spdekit/sparse.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace spdekit {

struct FactorStats {
  Index n = 0;
  Index nnz_q = 0;  // stored lower-triangle entries of Q
  Index nnz_l = 0;
  double fill_ratio = 0.0;  // nnz_l / nnz_q
  double log_determinant = 0.0;
};

// key=value lines, one per field, 17 significant digits.
void write_stats(std::ostream& os, const FactorStats& stats);

// Simplicial Cholesky factor P Q P' = L L' of a sparse SPD matrix.
// L is stored column-wise with sorted row indices and the diagonal first.
class CholeskyFactor {
 public:
  // Throws NotPositiveDefinite carrying the original index of the failing pivot.
  static CholeskyFactor factorize(const SparseSymMatrix& q, Ordering ordering = Ordering::amd);

  Index size() const { return n_; }
  // perm[k] = original index placed at position k.
  const std::vector<Index>& permutation() const { return perm_; }
  const std::vector<Index>& inverse_permutation() const { return pinv_; }

  std::span<const Index> col_ptr() const { return lp_; }
  std::span<const Index> row_idx() const { return li_; }
  std::span<const double> values() const { return lx_; }
  Index nnz() const { return static_cast<Index>(lx_.size()); }

  double log_determinant() const { return logdet_; }
  FactorStats stats() const;

  Vector solve(const Vector& b) const;
  DenseMatrix solve(const DenseMatrix& b) const;

  // x = P' L^{-T} z for a given standard-normal vector z (in factor order).
  Vector apply_inverse_root(const Vector& z) const;
  // Draw from N(0, Q^{-1}); z_k comes from the counter-based generator at index k.
  Vector sample(std::uint64_t seed) const;

  // Entries of Q^{-1} on the pattern of L + L', in the original ordering.
  SparseSymMatrix selected_inverse() const;

  // Dense L (in factor order), for verification.
  DenseMatrix lower_dense() const;

 private:
  Index n_ = 0;
  Index nnz_q_ = 0;
  std::vector<Index> perm_;
  std::vector<Index> pinv_;
  std::vector<Index> lp_;
  std::vector<Index> li_;
  std::vector<double> lx_;
  double logdet_ = 0.0;

  void lower_solve_in_place(Vector& x) const;
  void upper_solve_in_place(Vector& x) const;
};

inline CholeskyFactor factorize(const SparseSymMatrix& q, Ordering ordering = Ordering::amd) {
  return CholeskyFactor::factorize(q, ordering);
}
inline Vector solve(const CholeskyFactor& f, const Vector& b) { return f.solve(b); }
inline DenseMatrix solve(const CholeskyFactor& f, const DenseMatrix& b) { return f.solve(b); }
inline Vector sample_gmrf(const CholeskyFactor& f, std::uint64_t seed) { return f.sample(seed); }
inline SparseSymMatrix selected_inverse(const CholeskyFactor& f) { return f.selected_inverse(); }

}  // namespace spdekit
