#include "vecagg/matrix.hpp"

#include <sstream>

namespace vecagg {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
  if (a.field() != b.field()) {
    throw UsageError("matrix field mismatch: F_" + std::to_string(a.field().q()) +
                     " vs F_" + std::to_string(b.field().q()));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("matrix shape mismatch: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
}

}  // namespace

Matrix::Matrix(Field field, int rows, int cols)
    : field_(field), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw UsageError("negative matrix dimension");
  a_.assign(static_cast<size_t>(rows) * cols, 0);
}

Matrix Matrix::identity(Field field, int n) {
  Matrix m(field, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field field,
                         std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<long long>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(field, v);
}

Matrix Matrix::from_rows(Field field, const std::vector<std::vector<long long>>& rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr == 0 ? 0 : static_cast<int>(rows[0].size());
  Matrix m(field, nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc) {
      throw UsageError("ragged rows in matrix literal");
    }
    for (int c = 0; c < nc; ++c) m(r, c) = field.reduce(rows[r][c]);
  }
  return m;
}

bool Matrix::is_zero() const {
  for (uint32_t v : a_) {
    if (v != 0) return false;
  }
  return true;
}

Matrix Matrix::transposed() const {
  Matrix t(field_, cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::negated() const {
  Matrix m(field_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = field_.neg(a_[i]);
  return m;
}

Matrix Matrix::row(int r) const { return rows_slice(r, r + 1); }

Matrix Matrix::rows_slice(int lo, int hi) const {
  if (lo < 0 || hi < lo || hi > rows_) throw UsageError("row slice out of range");
  Matrix m(field_, hi - lo, cols_);
  for (int r = lo; r < hi; ++r) {
    for (int c = 0; c < cols_; ++c) m(r - lo, c) = (*this)(r, c);
  }
  return m;
}

Matrix Matrix::columns(const std::vector<int>& which) const {
  Matrix m(field_, rows_, static_cast<int>(which.size()));
  for (size_t j = 0; j < which.size(); ++j) {
    int c = which[j];
    if (c < 0 || c >= cols_) throw UsageError("column index out of range");
    for (int r = 0; r < rows_; ++r) m(r, static_cast<int>(j)) = (*this)(r, c);
  }
  return m;
}

bool Matrix::operator==(const Matrix& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
         a_ == other.a_;
}

std::string Matrix::to_string() const {
  std::ostringstream out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (c) out << ' ';
      out << (*this)(r, c);
    }
    out << '\n';
  }
  return out.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw UsageError("matrix product shape mismatch: " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
  const Field& f = a.field();
  const uint64_t q = f.q();
  Matrix out(f, a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) {
      uint64_t acc = 0;
      for (int k = 0; k < a.cols(); ++k) {
        acc += static_cast<uint64_t>(a(r, k)) * b(k, c) % q;
      }
      out(r, c) = static_cast<uint32_t>(acc % q);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  require_same_shape(a, b);
  Matrix out(a.field(), a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a.field().add(a(r, c), b(r, c));
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  require_same_shape(a, b);
  Matrix out(a.field(), a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a.field().sub(a(r, c), b(r, c));
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.cols()) throw UsageError("vstack column mismatch");
  Matrix out(a.field(), a.rows() + b.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  }
  for (int r = 0; r < b.rows(); ++r) {
    for (int c = 0; c < b.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  }
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows()) throw UsageError("hstack row mismatch");
  Matrix out(a.field(), a.rows(), a.cols() + b.cols());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    for (int c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
  }
  return out;
}

Matrix apply_col_perm(const Matrix& a, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != a.cols()) {
    throw UsageError("permutation length does not match column count");
  }
  std::vector<int> which(perm.begin(), perm.end());
  return a.columns(which);
}

std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

std::vector<int> inverse_perm(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size(), -1);
  for (size_t j = 0; j < perm.size(); ++j) {
    int v = perm[j];
    if (v < 0 || v >= static_cast<int>(perm.size()) || inv[v] != -1) {
      throw UsageError("not a permutation");
    }
    inv[v] = static_cast<int>(j);
  }
  return inv;
}

}  // namespace vecagg
