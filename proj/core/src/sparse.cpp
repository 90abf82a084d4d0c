#include "spdekit/sparse.hpp"

#include "spdekit/error.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace spdekit {

namespace {

// Sorts entries by (major, minor), sums duplicates and drops exact zeros.
// Returns compressed pointers over `major_count` slots.
void compress(std::vector<Triplet>& entries, bool row_major, Index major_count,
              std::vector<Index>& ptr, std::vector<Index>& idx, std::vector<double>& val) {
  auto major = [row_major](const Triplet& t) { return row_major ? t.row : t.col; };
  auto minor = [row_major](const Triplet& t) { return row_major ? t.col : t.row; };
  std::stable_sort(entries.begin(), entries.end(), [&](const Triplet& a, const Triplet& b) {
    return major(a) != major(b) ? major(a) < major(b) : minor(a) < minor(b);
  });
  ptr.assign(static_cast<std::size_t>(major_count) + 1, 0);
  idx.clear();
  val.clear();
  idx.reserve(entries.size());
  val.reserve(entries.size());
  std::size_t k = 0;
  while (k < entries.size()) {
    const Index ma = major(entries[k]);
    const Index mi = minor(entries[k]);
    double sum = 0.0;
    while (k < entries.size() && major(entries[k]) == ma && minor(entries[k]) == mi) {
      sum += entries[k].value;
      ++k;
    }
    if (sum != 0.0) {
      idx.push_back(mi);
      val.push_back(sum);
      ++ptr[static_cast<std::size_t>(ma) + 1];
    }
  }
  for (Index m = 0; m < major_count; ++m) ptr[m + 1] += ptr[m];
}

void check_bounds(Index rows, Index cols, const Triplet& t) {
  if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
    throw InvalidArgument("sparse entry (" + std::to_string(t.row) + "," +
                          std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_ptr_(static_cast<std::size_t>(rows) + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::span<const Triplet> entries) {
  std::vector<Triplet> work(entries.begin(), entries.end());
  for (const auto& t : work) check_bounds(rows, cols, t);
  SparseMatrix m(rows, cols);
  compress(work, true, rows, m.row_ptr_, m.col_idx_, m.values_);
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) { return diagonal(Vector::Ones(n)); }

SparseMatrix SparseMatrix::diagonal(const Vector& d) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return from_triplets(d.size(), d.size(), t);
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
  std::vector<Triplet> t;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) t.push_back({i, j, m(i, j)});
  return from_triplets(m.rows(), m.cols(), t);
}

std::span<const Index> SparseMatrix::row_indices(Index r) const {
  return std::span<const Index>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

std::span<const double> SparseMatrix::row_values(Index r) const {
  return std::span<const double>(values_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
}

double SparseMatrix::coeff(Index r, Index c) const {
  const auto cols = row_indices(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + (it - cols.begin())];
}

Vector SparseMatrix::multiply(const Vector& x) const {
  if (x.size() != cols_) throw InvalidArgument("SparseMatrix::multiply: dimension mismatch");
  Vector y = Vector::Zero(rows_);
  for (Index r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += values_[p] * x[col_idx_[p]];
    y[r] = s;
  }
  return y;
}

Vector SparseMatrix::multiply_transpose(const Vector& y) const {
  if (y.size() != rows_) throw InvalidArgument("SparseMatrix::multiply_transpose: dimension mismatch");
  Vector x = Vector::Zero(cols_);
  for (Index r = 0; r < rows_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) x[col_idx_[p]] += values_[p] * y[r];
  return x;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<Index> count(static_cast<std::size_t>(cols_) + 1, 0);
  for (Index c : col_idx_) ++count[c + 1];
  for (Index c = 0; c < cols_; ++c) count[c + 1] += count[c];
  t.row_ptr_ = count;
  t.col_idx_.resize(col_idx_.size());
  t.values_.resize(values_.size());
  for (Index r = 0; r < rows_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const Index dst = count[col_idx_[p]]++;
      t.col_idx_[dst] = r;
      t.values_[dst] = values_[p];
    }
  }
  return t;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) d(r, col_idx_[p]) = values_[p];
  return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index r = 0; r < rows_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) t.push_back({r, col_idx_[p], values_[p]});
  return t;
}

SparseMatrix SparseMatrix::scaled(const Vector& left, const Vector& right) const {
  if ((left.size() != 0 && left.size() != rows_) || (right.size() != 0 && right.size() != cols_))
    throw InvalidArgument("SparseMatrix::scaled: dimension mismatch");
  SparseMatrix out = *this;
  for (Index r = 0; r < rows_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (left.size() != 0) out.values_[p] *= left[r];
      if (right.size() != 0) out.values_[p] *= right[col_idx_[p]];
    }
  }
  return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("sparse product: dimension mismatch");
  SparseMatrix c(a.rows_, b.cols_);
  std::vector<double> acc(static_cast<std::size_t>(b.cols_), 0.0);
  std::vector<Index> mark(static_cast<std::size_t>(b.cols_), -1);
  std::vector<Index> pattern;
  for (Index r = 0; r < a.rows_; ++r) {
    pattern.clear();
    for (Index p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const Index k = a.col_idx_[p];
      const double av = a.values_[p];
      for (Index q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
        const Index j = b.col_idx_[q];
        if (mark[j] != r) {
          mark[j] = r;
          acc[j] = 0.0;
          pattern.push_back(j);
        }
        acc[j] += av * b.values_[q];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index j : pattern) {
      if (acc[j] != 0.0) {
        c.col_idx_.push_back(j);
        c.values_.push_back(acc[j]);
      }
    }
    c.row_ptr_[r + 1] = static_cast<Index>(c.col_idx_.size());
  }
  return c;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidArgument("sparse sum: dimension mismatch");
  auto t = a.triplets();
  auto tb = b.triplets();
  t.insert(t.end(), tb.begin(), tb.end());
  return SparseMatrix::from_triplets(a.rows_, a.cols_, t);
}

SparseMatrix operator*(double s, const SparseMatrix& a) {
  SparseMatrix out = a;
  for (double& v : out.values_) v *= s;
  if (s == 0.0) return SparseMatrix(a.rows_, a.cols_);
  return out;
}

// ---------------------------------------------------------------------------
// SparseSymMatrix

SparseSymMatrix::SparseSymMatrix(Index n) : n_(n), col_ptr_(static_cast<std::size_t>(n) + 1, 0) {}

SparseSymMatrix SparseSymMatrix::from_triplets(Index n, std::span<const Triplet> entries) {
  std::vector<Triplet> work;
  work.reserve(entries.size());
  for (const auto& t : entries) {
    check_bounds(n, n, t);
    if (t.row >= t.col)
      work.push_back(t);
    else
      work.push_back({t.col, t.row, t.value});
  }
  SparseSymMatrix m(n);
  compress(work, false, n, m.col_ptr_, m.row_idx_, m.values_);
  return m;
}

SparseSymMatrix SparseSymMatrix::from_general(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("from_general: matrix is not square");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz()));
  for (Index r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_indices(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Index c = cols[k];
      t.push_back({std::max(r, c), std::min(r, c), r == c ? vals[k] : 0.5 * vals[k]});
    }
  }
  return from_triplets(a.rows(), t);
}

SparseSymMatrix SparseSymMatrix::from_dense(const DenseMatrix& m, double drop_tol) {
  if (m.rows() != m.cols()) throw InvalidArgument("from_dense: matrix is not square");
  std::vector<Triplet> t;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j; i < m.rows(); ++i) {
      const double v = i == j ? m(i, i) : 0.5 * (m(i, j) + m(j, i));
      if (std::abs(v) > drop_tol) t.push_back({i, j, v});
    }
  return from_triplets(m.rows(), t);
}

SparseSymMatrix SparseSymMatrix::identity(Index n) { return diagonal(Vector::Ones(n)); }

SparseSymMatrix SparseSymMatrix::diagonal(const Vector& d) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return from_triplets(d.size(), t);
}

std::optional<double> SparseSymMatrix::find(Index i, Index j) const {
  if (i < j) std::swap(i, j);
  const auto first = row_idx_.begin() + col_ptr_[j];
  const auto last = row_idx_.begin() + col_ptr_[j + 1];
  const auto it = std::lower_bound(first, last, i);
  if (it == last || *it != i) return std::nullopt;
  return values_[static_cast<std::size_t>(it - row_idx_.begin())];
}

Vector SparseSymMatrix::multiply(const Vector& x) const {
  if (x.size() != n_) throw InvalidArgument("SparseSymMatrix::multiply: dimension mismatch");
  Vector y = Vector::Zero(n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const Index i = row_idx_[p];
      y[i] += values_[p] * x[j];
      if (i != j) y[j] += values_[p] * x[i];
    }
  }
  return y;
}

Vector SparseSymMatrix::diagonal() const {
  Vector d = Vector::Zero(n_);
  for (Index j = 0; j < n_; ++j)
    if (col_ptr_[j] < col_ptr_[j + 1] && row_idx_[col_ptr_[j]] == j) d[j] = values_[col_ptr_[j]];
  return d;
}

DenseMatrix SparseSymMatrix::to_dense() const {
  DenseMatrix d = DenseMatrix::Zero(n_, n_);
  for (Index j = 0; j < n_; ++j)
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      d(row_idx_[p], j) = values_[p];
      d(j, row_idx_[p]) = values_[p];
    }
  return d;
}

SparseMatrix SparseSymMatrix::to_general() const {
  std::vector<Triplet> t;
  t.reserve(2 * values_.size());
  for (Index j = 0; j < n_; ++j)
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      t.push_back({row_idx_[p], j, values_[p]});
      if (row_idx_[p] != j) t.push_back({j, row_idx_[p], values_[p]});
    }
  return SparseMatrix::from_triplets(n_, n_, t);
}

SparseSymMatrix SparseSymMatrix::scaled(const Vector& s) const {
  if (s.size() != n_) throw InvalidArgument("SparseSymMatrix::scaled: dimension mismatch");
  SparseSymMatrix out = *this;
  for (Index j = 0; j < n_; ++j)
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) out.values_[p] *= s[row_idx_[p]] * s[j];
  return out;
}

SparseSymMatrix SparseSymMatrix::scaled(double s) const {
  if (s == 0.0) return SparseSymMatrix(n_);
  SparseSymMatrix out = *this;
  for (double& v : out.values_) v *= s;
  return out;
}

double SparseSymMatrix::quadratic_form(const Vector& x) const {
  if (x.size() != n_) throw InvalidArgument("quadratic_form: dimension mismatch");
  double s = 0.0;
  for (Index j = 0; j < n_; ++j)
    for (Index p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
      const Index i = row_idx_[p];
      s += (i == j ? 1.0 : 2.0) * values_[p] * x[i] * x[j];
    }
  return s;
}

SparseSymMatrix operator+(const SparseSymMatrix& a, const SparseSymMatrix& b) {
  if (a.n_ != b.n_) throw InvalidArgument("symmetric sum: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(a.values_.size() + b.values_.size());
  for (const SparseSymMatrix* m : {&a, &b})
    for (Index j = 0; j < m->n_; ++j)
      for (Index p = m->col_ptr_[j]; p < m->col_ptr_[j + 1]; ++p)
        t.push_back({m->row_idx_[p], j, m->values_[p]});
  return SparseSymMatrix::from_triplets(a.n_, t);
}

SparseSymMatrix kronecker(const SparseSymMatrix& a, const SparseSymMatrix& b) {
  const Index nb = b.size();
  const SparseMatrix bg = b.to_general();
  std::vector<Triplet> t;
  const auto acp = a.col_ptr();
  const auto ari = a.row_idx();
  const auto av = a.values();
  for (Index ja = 0; ja < a.size(); ++ja) {
    for (Index p = acp[ja]; p < acp[ja + 1]; ++p) {
      const Index ia = ari[p];
      // Block (ia, ja) of the product is a(ia, ja) * b.
      for (Index r = 0; r < nb; ++r) {
        const auto cols = bg.row_indices(r);
        const auto vals = bg.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
          const Index gi = ia * nb + r;
          const Index gj = ja * nb + cols[k];
          if (gi >= gj) t.push_back({gi, gj, av[p] * vals[k]});
        }
      }
    }
  }
  return SparseSymMatrix::from_triplets(a.size() * nb, t);
}

// ---------------------------------------------------------------------------
// Matrix Market

namespace {

void write_header(std::ostream& os, const char* symmetry, Index rows, Index cols, Index nnz) {
  os << "%%MatrixMarket matrix coordinate real " << symmetry << "\n";
  os << rows << " " << cols << " " << nnz << "\n";
  os << std::setprecision(17);
}

struct MmHeader {
  bool symmetric = false;
  Index rows = 0, cols = 0, nnz = 0;
};

MmHeader read_header(std::istream& is, std::size_t& line_no) {
  std::string line;
  MmHeader h;
  if (!std::getline(is, line)) throw ParseError(1, "empty Matrix Market stream");
  line_no = 1;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate")
    throw ParseError(1, "expected '%%MatrixMarket matrix coordinate'");
  if (field != "real" && field != "integer") throw ParseError(1, "unsupported field '" + field + "'");
  if (symmetry == "symmetric")
    h.symmetric = true;
  else if (symmetry != "general")
    throw ParseError(1, "unsupported symmetry '" + symmetry + "'");
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size(line);
    if (!(size >> h.rows >> h.cols >> h.nnz)) throw ParseError(line_no, "bad size line");
    return h;
  }
  throw ParseError(line_no, "missing size line");
}

std::vector<Triplet> read_entries(std::istream& is, const MmHeader& h, std::size_t& line_no) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(h.nnz));
  std::string line;
  while (static_cast<Index>(t.size()) < h.nnz && std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream in(line);
    Index i, j;
    double v;
    if (!(in >> i >> j >> v)) throw ParseError(line_no, "bad entry");
    if (i < 1 || i > h.rows || j < 1 || j > h.cols) throw ParseError(line_no, "index out of range");
    t.push_back({i - 1, j - 1, v});
  }
  if (static_cast<Index>(t.size()) != h.nnz) throw ParseError(line_no, "fewer entries than declared");
  return t;
}

}  // namespace

void write_matrix_market(std::ostream& os, const SparseSymMatrix& m) {
  write_header(os, "symmetric", m.size(), m.size(), m.nnz());
  const auto cp = m.col_ptr();
  const auto ri = m.row_idx();
  const auto v = m.values();
  for (Index j = 0; j < m.size(); ++j)
    for (Index p = cp[j]; p < cp[j + 1]; ++p) os << ri[p] + 1 << " " << j + 1 << " " << v[p] << "\n";
}

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
  write_header(os, "general", m.rows(), m.cols(), m.nnz());
  for (Index r = 0; r < m.rows(); ++r) {
    const auto cols = m.row_indices(r);
    const auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) os << r + 1 << " " << cols[k] + 1 << " " << vals[k] << "\n";
  }
}

SparseSymMatrix read_matrix_market_symmetric(std::istream& is) {
  std::size_t line_no = 0;
  const MmHeader h = read_header(is, line_no);
  if (h.rows != h.cols) throw ParseError(line_no, "symmetric matrix must be square");
  auto t = read_entries(is, h, line_no);
  if (h.symmetric) return SparseSymMatrix::from_triplets(h.rows, t);
  return SparseSymMatrix::from_general(SparseMatrix::from_triplets(h.rows, h.cols, t));
}

SparseMatrix read_matrix_market_general(std::istream& is) {
  std::size_t line_no = 0;
  const MmHeader h = read_header(is, line_no);
  auto t = read_entries(is, h, line_no);
  if (h.symmetric) {
    const std::size_t n = t.size();
    for (std::size_t k = 0; k < n; ++k)
      if (t[k].row != t[k].col) t.push_back({t[k].col, t[k].row, t[k].value});
  }
  return SparseMatrix::from_triplets(h.rows, h.cols, t);
}

}  // namespace spdekit
