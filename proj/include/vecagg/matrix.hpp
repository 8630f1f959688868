#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "vecagg/field.hpp"

namespace vecagg {

/// Dense row-major matrix over a prime field. Entries are canonical
/// residues; every binary operation checks that shapes and fields agree.
/// Matrices are plain values: copy, compare, share freely.
class Matrix {
 public:
  Matrix(Field field, int rows, int cols);

  static Matrix identity(Field field, int n);

  /// Builds a matrix from integer rows, reducing each entry mod q.
  /// Handy for literal fixtures that use negative coefficients.
  static Matrix from_rows(Field field,
                          std::initializer_list<std::initializer_list<long long>> rows);
  static Matrix from_rows(Field field,
                          const std::vector<std::vector<long long>>& rows);

  const Field& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  uint32_t operator()(int r, int c) const { return a_[idx(r, c)]; }
  uint32_t& operator()(int r, int c) { return a_[idx(r, c)]; }

  const std::vector<uint32_t>& entries() const { return a_; }

  bool is_zero() const;

  Matrix transposed() const;
  Matrix negated() const;
  Matrix row(int r) const;
  Matrix rows_slice(int lo, int hi) const;      // rows [lo, hi)
  Matrix columns(const std::vector<int>& which) const;

  bool operator==(const Matrix& other) const;
  bool operator!=(const Matrix& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * cols_ + c; }

  Field field_;
  int rows_;
  int cols_;
  std::vector<uint32_t> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Vertical stack [a; b].
Matrix vstack(const Matrix& a, const Matrix& b);
/// Horizontal stack [a | b].
Matrix hstack(const Matrix& a, const Matrix& b);

/// Applies a column permutation: result column j is `a` column perm[j].
Matrix apply_col_perm(const Matrix& a, const std::vector<int>& perm);

std::vector<int> identity_perm(int n);
std::vector<int> inverse_perm(const std::vector<int>& perm);

}  // namespace vecagg
