#include "vecagg/linalg.hpp"

#include <algorithm>
#include <utility>

namespace vecagg {

RrefResult rref(const Matrix& a) {
  const Field& f = a.field();
  Matrix r = a;
  Matrix t = Matrix::identity(f, a.rows());
  std::vector<int> pivots;

  auto swap_rows = [](Matrix& m, int i, int j) {
    for (int c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
  };
  auto scale_row = [&f](Matrix& m, int i, uint32_t s) {
    for (int c = 0; c < m.cols(); ++c) m(i, c) = f.mul(m(i, c), s);
  };
  auto addmul_row = [&f](Matrix& m, int dst, int src, uint32_t s) {
    for (int c = 0; c < m.cols(); ++c) {
      m(dst, c) = f.add(m(dst, c), f.mul(m(src, c), s));
    }
  };

  int pr = 0;
  for (int col = 0; col < a.cols() && pr < a.rows(); ++col) {
    int sel = -1;
    for (int i = pr; i < a.rows(); ++i) {
      if (r(i, col) != 0) {
        sel = i;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != pr) {
      swap_rows(r, sel, pr);
      swap_rows(t, sel, pr);
    }
    uint32_t s = f.inv(r(pr, col));
    scale_row(r, pr, s);
    scale_row(t, pr, s);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == pr || r(i, col) == 0) continue;
      uint32_t factor = f.neg(r(i, col));
      addmul_row(r, i, pr, factor);
      addmul_row(t, i, pr, factor);
    }
    pivots.push_back(col);
    ++pr;
  }
  return {std::move(r), std::move(t), std::move(pivots)};
}

int rank(const Matrix& a) { return static_cast<int>(rref(a).pivots.size()); }

int conditional_rank(const Matrix& f, const Matrix& g) {
  if (f.field() != g.field()) throw UsageError("conditional_rank: field mismatch");
  if (f.cols() != g.cols()) {
    throw UsageError("conditional_rank: column counts differ (" +
                     std::to_string(f.cols()) + " vs " + std::to_string(g.cols()) + ")");
  }
  return rank(vstack(f, g)) - rank(f);
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw UsageError("inverse: matrix not square");
  RrefResult rr = rref(a);
  if (static_cast<int>(rr.pivots.size()) != a.rows()) {
    throw UsageError("inverse: matrix is singular");
  }
  return rr.t;
}

Normalization normalize_computation(const Matrix& f) {
  const int m = f.rows();
  const int k = f.cols();
  for (int c = 0; c < k; ++c) {
    bool zero = true;
    for (int r = 0; r < m; ++r) {
      if (f(r, c) != 0) {
        zero = false;
        break;
      }
    }
    if (zero) {
      throw UsageError("computation matrix has a zero column (column " +
                       std::to_string(c) + "); eliminate that user first");
    }
  }

  RrefResult rr = rref(f);
  if (static_cast<int>(rr.pivots.size()) != m) {
    throw UsageError("computation matrix is row-rank deficient (rank " +
                     std::to_string(rr.pivots.size()) + " < " + std::to_string(m) +
                     "); reduce it to independent rows first");
  }

  std::vector<int> perm = rr.pivots;
  std::vector<bool> is_pivot(k, false);
  for (int p : rr.pivots) is_pivot[p] = true;
  for (int c = 0; c < k; ++c) {
    if (!is_pivot[c]) perm.push_back(c);
  }

  std::vector<int> tail(perm.begin() + m, perm.end());
  Matrix f_tilde = rr.r.columns(tail);
  return {rr.t, inverse(rr.t), std::move(perm), std::move(f_tilde)};
}

Matrix completion_v(const Matrix& f, const Matrix& g, const Normalization& norm) {
  if (f.field() != g.field()) throw UsageError("completion_v: field mismatch");
  if (f.cols() != g.cols()) throw UsageError("completion_v: column counts differ");
  const Field& field = f.field();
  const int k = f.cols();
  const int m = f.rows();

  Matrix fp = apply_col_perm(f, norm.perm);
  Matrix gp = apply_col_perm(g, norm.perm);
  Matrix stack = vstack(fp, gp);
  const int r = rank(stack);

  // Complete the row space with standard-basis rows in index order. A
  // candidate is kept iff it is independent of everything kept so far.
  Matrix current = stack;
  int current_rank = r;
  std::vector<int> chosen;
  for (int i = 0; i < k && current_rank < k; ++i) {
    Matrix e(field, 1, k);
    e(0, i) = 1;
    Matrix trial = vstack(current, e);
    if (rank(trial) > current_rank) {
      chosen.push_back(i);
      current = std::move(trial);
      ++current_rank;
    }
  }
  if (current_rank != k) throw InternalError("completion_v: completion failed");

  // Eliminate the leading m coordinates of each kept row against the
  // normalized [I | f_tilde] rows, then keep the tail block.
  Matrix norm_rows = hstack(Matrix::identity(field, m), norm.f_tilde);
  Matrix v(field, static_cast<int>(chosen.size()), k - m);
  for (size_t row = 0; row < chosen.size(); ++row) {
    std::vector<uint32_t> u(k, 0);
    u[chosen[row]] = 1;
    for (int j = 0; j < m; ++j) {
      uint32_t coef = u[j];
      if (coef == 0) continue;
      for (int c = 0; c < k; ++c) {
        u[c] = field.sub(u[c], field.mul(coef, norm_rows(j, c)));
      }
    }
    for (int j = 0; j < m; ++j) {
      if (u[j] != 0) throw InternalError("completion_v: leading block not eliminated");
    }
    for (int c = m; c < k; ++c) v(static_cast<int>(row), c - m) = u[c];
  }
  return v;
}

Matrix right_kernel_basis(const Matrix& v) {
  const Field& field = v.field();
  const int n = v.cols();
  if (v.rows() == 0) return Matrix::identity(field, n);

  RrefResult rr = rref(v);
  if (static_cast<int>(rr.pivots.size()) != v.rows()) {
    throw InternalError("right_kernel_basis: input is not full row rank");
  }

  std::vector<bool> is_pivot(n, false);
  for (int p : rr.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }

  Matrix basis(field, n, static_cast<int>(free_cols.size()));
  for (size_t j = 0; j < free_cols.size(); ++j) {
    int fc = free_cols[j];
    basis(fc, static_cast<int>(j)) = 1;
    for (size_t i = 0; i < rr.pivots.size(); ++i) {
      basis(rr.pivots[i], static_cast<int>(j)) = field.neg(rr.r(static_cast<int>(i), fc));
    }
  }
  return basis;
}

}  // namespace vecagg
