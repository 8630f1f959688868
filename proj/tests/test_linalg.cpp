#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vecagg/linalg.hpp"
#include "vecagg/rng.hpp"

using namespace vecagg;

namespace {

Matrix random_matrix(const Field& field, int rows, int cols, Rng& rng) {
  Matrix m(field, rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.residue(field.q());
  }
  return m;
}

// Rejection-samples a full-row-rank matrix; optionally forbids zero columns.
Matrix random_full_rank(const Field& field, int rows, int cols, Rng& rng,
                        bool no_zero_cols) {
  for (;;) {
    Matrix m = random_matrix(field, rows, cols, rng);
    if (rank(m) != rows) continue;
    if (no_zero_cols) {
      bool ok = true;
      for (int c = 0; c < cols && ok; ++c) {
        bool zero = true;
        for (int r = 0; r < rows; ++r) {
          if (m(r, c) != 0) zero = false;
        }
        if (zero) ok = false;
      }
      if (!ok) continue;
    }
    return m;
  }
}

const Field f7(7);

Matrix example1_f() {
  return Matrix::from_rows(f7, {{2, 0, 5, 3, 1}, {5, 1, 4, 2, 4}, {0, 4, 3, 5, 1}});
}

Matrix example2_f() {
  return Matrix::from_rows(f7, {{1, 0, 5, 5, 3, 5}, {0, 1, 5, 6, 0, 3}});
}

Matrix example2_g() {
  return Matrix::from_rows(f7,
                           {{3, 0, 1, 4, 2, 4}, {2, 2, 1, 3, 5, 3}, {1, 1, 3, 4, 3, 1}});
}

}  // namespace

TEST_CASE("rref on identity and zero matrices") {
  Field f5(5);
  Matrix id = Matrix::identity(f5, 3);
  RrefResult rr = rref(id);
  CHECK(rr.r == id);
  CHECK(rr.t == id);
  CHECK(rr.pivots == std::vector<int>{0, 1, 2});

  Matrix zero(f5, 2, 3);
  RrefResult rz = rref(zero);
  CHECK(rz.r == zero);
  CHECK(rz.pivots.empty());
}

TEST_CASE("rref reduces the worked computation matrix to [I | Ftilde]") {
  RrefResult rr = rref(example1_f());
  Matrix expected = Matrix::from_rows(
      f7, {{1, 0, 0, 1, 5}, {0, 1, 0, 6, 3}, {0, 0, 1, 3, 1}});
  CHECK(rr.r == expected);
  CHECK(rr.pivots == std::vector<int>{0, 1, 2});
  CHECK(rr.t * example1_f() == expected);
}

TEST_CASE("rank fixtures") {
  CHECK(rank(Matrix::identity(f7, 5)) == 5);
  CHECK(rank(Matrix(f7, 3, 4)) == 0);
  CHECK(rank(vstack(example2_f(), example2_g())) == 4);
}

TEST_CASE("conditional rank fixtures") {
  CHECK(conditional_rank(example1_f(), Matrix::identity(f7, 5)) == 2);
  CHECK(conditional_rank(example2_f(), example2_g()) == 2);
  CHECK(conditional_rank(example2_f(), example2_f()) == 0);

  Field f5(5);
  CHECK_THROWS_AS(conditional_rank(Matrix(f5, 1, 2), Matrix(f5, 1, 3)), UsageError);
  CHECK_THROWS_AS(conditional_rank(Matrix(f5, 1, 2), Matrix(f7, 1, 2)), UsageError);
}

TEST_CASE("conditional rank is zero iff g lies in f's row space") {
  Rng rng(411);
  for (int trial = 0; trial < 200; ++trial) {
    Field field(trial % 2 ? 5 : 3);
    int k = 2 + static_cast<int>(rng.next() % 3);
    int m = 1 + static_cast<int>(rng.next() % k);
    Matrix f = random_full_rank(field, m, k, rng, false);
    // combinations of f's rows
    Matrix coeff = random_matrix(field, 2, m, rng);
    CHECK(conditional_rank(f, coeff * f) == 0);
    // any g: zero iff every row reduces to zero against f
    Matrix g = random_matrix(field, 2, k, rng);
    bool inside = rank(vstack(f, g)) == rank(f);
    CHECK((conditional_rank(f, g) == 0) == inside);
  }
}

TEST_CASE("normalize_computation on the worked matrices") {
  Normalization n1 = normalize_computation(example1_f());
  CHECK(n1.perm == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(n1.f_tilde == Matrix::from_rows(f7, {{1, 5}, {6, 3}, {3, 1}}));

  Field f5(5);
  Normalization n2 = normalize_computation(Matrix::from_rows(f5, {{1, 1, 1}}));
  CHECK(n2.perm == std::vector<int>{0, 1, 2});
  CHECK(n2.t == Matrix::identity(f5, 1));
  CHECK(n2.f_tilde == Matrix::from_rows(f5, {{1, 1}}));

  // square invertible case: row operations alone suffice, permutation stays
  // identity and f_tilde is empty
  Normalization n3 = normalize_computation(Matrix::from_rows(f5, {{0, 1}, {1, 0}}));
  CHECK(n3.perm == std::vector<int>{0, 1});
  CHECK(n3.t == Matrix::from_rows(f5, {{0, 1}, {1, 0}}));
  CHECK(n3.f_tilde.cols() == 0);

  // a permutation becomes necessary when a leading column is dependent
  Normalization n4 = normalize_computation(Matrix::from_rows(f5, {{1, 2, 1}, {2, 4, 1}}));
  CHECK(n4.perm == std::vector<int>{0, 2, 1});
  CHECK(n4.t * apply_col_perm(Matrix::from_rows(f5, {{1, 2, 1}, {2, 4, 1}}), n4.perm) ==
        hstack(Matrix::identity(f5, 2), n4.f_tilde));
}

TEST_CASE("normalize_computation rejects bad inputs") {
  Field f5(5);
  CHECK_THROWS_AS(normalize_computation(Matrix::from_rows(f5, {{1, 0}, {2, 0}})),
                  UsageError);  // duplicate direction -> rank deficient
  CHECK_THROWS_AS(normalize_computation(Matrix::from_rows(f5, {{1, 0, 0}, {1, 0, 0}})),
                  UsageError);
  CHECK_THROWS_AS(normalize_computation(Matrix::from_rows(f5, {{1, 0, 1}, {1, 0, 2}})),
                  UsageError);  // zero column
}

TEST_CASE("normalization reconstructs f exactly on random matrices") {
  Rng rng(1337);
  int trials = 0;
  while (trials < 1000) {
    Field field(std::vector<uint32_t>{2, 3, 5, 7}[rng.next() % 4]);
    int k = 1 + static_cast<int>(rng.next() % 6);
    int m = 1 + static_cast<int>(rng.next() % k);
    Matrix f = random_full_rank(field, m, k, rng, true);
    Normalization norm = normalize_computation(f);
    Matrix normalized = hstack(Matrix::identity(field, m), norm.f_tilde);
    CHECK(norm.t * apply_col_perm(f, norm.perm) == normalized);
    // undo: t_inv * normalized, then columns back
    Matrix fp = norm.t_inv * normalized;
    Matrix back = apply_col_perm(fp, inverse_perm(norm.perm));
    CHECK(back == f);
    ++trials;
  }
}

TEST_CASE("completion_v and the kernel basis satisfy the defining properties") {
  // a reference choice for the worked instance must pass the property check
  Matrix v_ref = Matrix::from_rows(f7, {{1, 0, 6, 6}, {0, 1, 6, 5}});
  Matrix vp_ref = Matrix::from_rows(f7, {{1, 1}, {1, 2}, {1, 0}, {0, 1}});
  CHECK((v_ref * vp_ref).is_zero());
  CHECK(rank(vp_ref) == 2);

  Normalization norm = normalize_computation(example2_f());
  Matrix v = completion_v(example2_f(), example2_g(), norm);
  CHECK(v.rows() == 2);
  CHECK(v.cols() == 4);
  Matrix padded = hstack(Matrix(f7, 2, 2), v);
  Matrix stack = vstack(vstack(apply_col_perm(example2_f(), norm.perm),
                               apply_col_perm(example2_g(), norm.perm)),
                        padded);
  CHECK(rank(stack) == 6);
  // the reference v must satisfy the same stack property
  Matrix stack_ref = vstack(vstack(example2_f(), example2_g()),
                              hstack(Matrix(f7, 2, 2), v_ref));
  CHECK(rank(stack_ref) == 6);

  Matrix v_perp = right_kernel_basis(v);
  CHECK((v * v_perp).is_zero());
  CHECK(rank(v_perp) == 2);
}

TEST_CASE("completion_v edge cases") {
  Field f5(5);
  // K = rank([f; g]): no completion rows, kernel basis is the identity
  Matrix f = Matrix::from_rows(f5, {{1, 1}});
  Matrix g = Matrix::identity(f5, 2);
  Normalization norm = normalize_computation(f);
  Matrix v = completion_v(f, g, norm);
  CHECK(v.rows() == 0);
  CHECK(v.cols() == 1);
  CHECK(right_kernel_basis(v) == Matrix::identity(f5, 1));

  // K = M: everything collapses to zero-size
  Matrix fid = Matrix::identity(f5, 3);
  Normalization nid = normalize_computation(fid);
  Matrix vid = completion_v(fid, fid, nid);
  CHECK(vid.rows() == 0);
  CHECK(vid.cols() == 0);
  CHECK(right_kernel_basis(vid).rows() == 0);
}

TEST_CASE("right_kernel_basis on a coordinate row") {
  Field f5(5);
  Matrix v = Matrix::from_rows(f5, {{1, 0}});
  Matrix basis = right_kernel_basis(v);
  CHECK(basis.rows() == 2);
  CHECK(basis.cols() == 1);
  CHECK(basis(0, 0) == 0);
  CHECK(basis(1, 0) != 0);
  CHECK_THROWS_AS(right_kernel_basis(Matrix::from_rows(f5, {{1, 0}, {2, 0}})),
                  InternalError);
}

TEST_CASE("stack rank and kernel identities hold on random instances") {
  Rng rng(2024);
  int trials = 0;
  while (trials < 1000) {
    Field field(std::vector<uint32_t>{2, 3, 5, 7}[rng.next() % 4]);
    int k = 2 + static_cast<int>(rng.next() % 5);
    int m = 1 + static_cast<int>(rng.next() % k);
    int n = 1 + static_cast<int>(rng.next() % k);
    Matrix f = random_full_rank(field, m, k, rng, true);
    Matrix g = random_full_rank(field, n, k, rng, false);

    Normalization norm = normalize_computation(f);
    Matrix v = completion_v(f, g, norm);
    Matrix v_perp = right_kernel_basis(v);
    int r = rank(vstack(f, g));

    CHECK(v.rows() == k - r);
    CHECK(v.cols() == k - m);
    CHECK(v_perp.rows() == k - m);
    CHECK(v_perp.cols() == r - m);
    CHECK((v * v_perp).is_zero());
    CHECK(rank(v_perp) == r - m);

    if (v.rows() > 0) {
      Matrix padded = hstack(Matrix(field, v.rows(), m), v);
      Matrix stack = vstack(
          vstack(apply_col_perm(f, norm.perm), apply_col_perm(g, norm.perm)), padded);
      CHECK(rank(stack) == k);
    }
    ++trials;
  }
}

TEST_CASE("rref properties on random matrices") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    Field field(std::vector<uint32_t>{2, 3, 5, 7}[rng.next() % 4]);
    int rows = 1 + static_cast<int>(rng.next() % 5);
    int cols = 1 + static_cast<int>(rng.next() % 5);
    Matrix a = random_matrix(field, rows, cols, rng);
    RrefResult rr = rref(a);
    CHECK(rr.t * a == rr.r);
    CHECK(rref(rr.r).r == rr.r);                       // idempotent
    CHECK(rank(a) == rank(a.transposed()));            // row rank == column rank
    CHECK(static_cast<int>(rr.pivots.size()) == rank(a));
  }
}
