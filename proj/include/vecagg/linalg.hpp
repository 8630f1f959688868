#pragma once

#include <vector>

#include "vecagg/matrix.hpp"

namespace vecagg {

/// Result of Gauss-Jordan reduction: r = t * a is the reduced row-echelon
/// form, t is invertible, pivots lists pivot columns left to right.
struct RrefResult {
  Matrix r;
  Matrix t;
  std::vector<int> pivots;
};

/// Reduced row-echelon form with transform. Pivot selection is the first
/// nonzero entry scanning columns left to right, rows top to bottom, so
/// identical inputs reduce identically everywhere.
RrefResult rref(const Matrix& a);

int rank(const Matrix& a);

/// rank([f; g]) - rank(f): the dimension of g's row space outside f's.
/// Requires matching column counts and fields.
int conditional_rank(const Matrix& f, const Matrix& g);

/// Inverse of a square full-rank matrix.
Matrix inverse(const Matrix& a);

/// t * f * perm (as columns) = [I | f_tilde]: an invertible row transform
/// plus a column permutation that expose an identity block in front.
struct Normalization {
  Matrix t;
  Matrix t_inv;
  std::vector<int> perm;  // perm[j] = source column placed at position j
  Matrix f_tilde;         // rows(f) x (cols(f) - rows(f))
};

/// Normalizes a full-row-rank computation matrix with no zero columns.
/// The permutation is the identity whenever the leading rows(f) columns are
/// already independent; otherwise pivot columns move to the front in pivot
/// order, the rest keep their relative order.
Normalization normalize_computation(const Matrix& f);

/// Finds rows completing the row space of [f*P; g*P] to full rank, with the
/// leading rows(f) coordinates eliminated through the identity block. The
/// result has (cols - rank([f;g])) rows and (cols - rows(f)) columns; the
/// stack [f*P; g*P; [0 | result]] has full column rank.
Matrix completion_v(const Matrix& f, const Matrix& g, const Normalization& norm);

/// Basis of the right kernel of a full-row-rank matrix, as columns, built
/// from the echelon form's free columns. A zero-row input yields the
/// identity. Throws InternalError when the input is row-rank-deficient.
Matrix right_kernel_basis(const Matrix& v);

}  // namespace vecagg
