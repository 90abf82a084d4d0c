#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace spdekit {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// General sparse matrix in compressed row layout. Column indices are sorted
// within each row and exact zeros are never stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  // Duplicate entries are summed.
  static SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries);
  static SparseMatrix identity(Index n);
  static SparseMatrix diagonal(const Vector& d);
  static SparseMatrix from_dense(const DenseMatrix& m);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_ptr() const { return row_ptr_; }
  std::span<const Index> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  std::span<const Index> row_indices(Index r) const;
  std::span<const double> row_values(Index r) const;

  double coeff(Index r, Index c) const;

  Vector multiply(const Vector& x) const;
  Vector multiply_transpose(const Vector& y) const;

  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;
  std::vector<Triplet> triplets() const;

  // diag(left) * this * diag(right); empty vectors mean identity.
  SparseMatrix scaled(const Vector& left, const Vector& right) const;

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
  friend SparseMatrix operator*(double s, const SparseMatrix& a);

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

// Symmetric sparse matrix storing only the lower triangle in compressed
// column layout (row >= col). Row indices are sorted within each column and the
// diagonal, when present, is the first entry of its column.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Index n);

  // Each off-diagonal pair must be supplied once, from either triangle;
  // entries above the diagonal are mirrored. Duplicates are summed.
  static SparseSymMatrix from_triplets(Index n, std::span<const Triplet> entries);
  // Symmetrises a square general matrix: stores (A(i,j) + A(j,i)) / 2.
  static SparseSymMatrix from_general(const SparseMatrix& a);
  static SparseSymMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);
  static SparseSymMatrix identity(Index n);
  static SparseSymMatrix diagonal(const Vector& d);

  Index size() const { return n_; }
  // Stored (lower-triangle) entries.
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> col_ptr() const { return col_ptr_; }
  std::span<const Index> row_idx() const { return row_idx_; }
  std::span<const double> values() const { return values_; }

  std::optional<double> find(Index i, Index j) const;
  double coeff(Index i, Index j) const { return find(i, j).value_or(0.0); }

  Vector multiply(const Vector& x) const;
  Vector diagonal() const;
  DenseMatrix to_dense() const;
  SparseMatrix to_general() const;

  // diag(s) * this * diag(s).
  SparseSymMatrix scaled(const Vector& s) const;
  SparseSymMatrix scaled(double s) const;

  // Quadratic form x' * this * x.
  double quadratic_form(const Vector& x) const;

  friend SparseSymMatrix operator+(const SparseSymMatrix& a, const SparseSymMatrix& b);

 private:
  Index n_ = 0;
  std::vector<Index> col_ptr_{0};
  std::vector<Index> row_idx_;
  std::vector<double> values_;
};

// Kronecker product a (x) b of two symmetric matrices.
SparseSymMatrix kronecker(const SparseSymMatrix& a, const SparseSymMatrix& b);

// Matrix Market coordinate format. Symmetric matrices are written with the
// "symmetric" qualifier and lower-triangle storage; values use 17 significant digits.
void write_matrix_market(std::ostream& os, const SparseSymMatrix& m);
void write_matrix_market(std::ostream& os, const SparseMatrix& m);
SparseSymMatrix read_matrix_market_symmetric(std::istream& is);
SparseMatrix read_matrix_market_general(std::istream& is);

}  // namespace spdekit
