#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vecagg/rng.hpp"
#include "vecagg/scheme.hpp"

using namespace vecagg;

namespace {

const Field f7(7);
const Field f5(5);

AggregationSpec example1_spec(int len = 1) {
  Matrix f = Matrix::from_rows(f7, {{2, 0, 5, 3, 1}, {5, 1, 4, 2, 4}, {0, 4, 3, 5, 1}});
  return AggregationSpec::make(f7, f, Matrix::identity(f7, 5), len);
}

AggregationSpec example2_spec(int len = 1) {
  Matrix f = Matrix::from_rows(f7, {{1, 0, 5, 5, 3, 5}, {0, 1, 5, 6, 0, 3}});
  Matrix g = Matrix::from_rows(f7,
                               {{3, 0, 1, 4, 2, 4}, {2, 2, 1, 3, 5, 3}, {1, 1, 3, 4, 3, 1}});
  return AggregationSpec::make(f7, f, g, len);
}

// The six-user worked scheme assembled from a reference completion and
// precoder pair.
Scheme example2_reference_scheme() {
  AggregationSpec spec = example2_spec();
  Normalization norm = normalize_computation(spec.f);
  Matrix v = Matrix::from_rows(f7, {{1, 0, 6, 6}, {0, 1, 6, 5}});
  Matrix v_perp = Matrix::from_rows(f7, {{1, 1}, {1, 2}, {1, 0}, {0, 1}});
  return assemble(spec, norm, v, v_perp);
}

AggregationSpec three_user_spec(int len = 1) {
  Matrix f = Matrix::from_rows(f5, {{1, 1, 1}});
  Matrix g = Matrix::from_rows(f5, {{1, 2, 3}});
  return AggregationSpec::make(f5, f, g, len);
}

// The scalar three-user scheme X1 = W1, X2 = W2 + N, X3 = W3 - N.
Scheme three_user_scalar_scheme() {
  AggregationSpec spec = three_user_spec();
  Normalization norm = normalize_computation(spec.f);
  Matrix v = completion_v(spec.f, spec.g, norm);
  Matrix v_perp = Matrix::from_rows(f5, {{1}, {-1}});
  return assemble(spec, norm, v, v_perp);
}

Matrix row1(const Field& field, std::initializer_list<long long> vals) {
  std::vector<std::vector<long long>> rows{std::vector<long long>(vals)};
  return Matrix::from_rows(field, rows);
}

}  // namespace

TEST_CASE("spec validation rejects degenerate instances") {
  CHECK_THROWS_AS(
      AggregationSpec::make(f5, Matrix::from_rows(f5, {{1, 0, 1}}), Matrix::identity(f5, 3)),
      UsageError);  // zero column
  CHECK_THROWS_AS(
      AggregationSpec::make(f5, Matrix::from_rows(f5, {{1, 1}, {2, 2}}), Matrix::identity(f5, 2)),
      UsageError);  // rank-deficient f
  CHECK_THROWS_AS(
      AggregationSpec::make(f5, Matrix::from_rows(f5, {{1, 1}}),
                            Matrix::from_rows(f5, {{1, 1}, {2, 2}})),
      UsageError);  // rank-deficient g
  CHECK_THROWS_AS(
      AggregationSpec::make(f5, Matrix::from_rows(f5, {{1, 1}}), Matrix::identity(f5, 3)),
      UsageError);  // column mismatch
  CHECK_THROWS_AS(
      AggregationSpec::make(f5, Matrix::from_rows(f5, {{1, 1}}), Matrix::identity(f5, 2), 0),
      UsageError);  // bad length
}

TEST_CASE("example 1 construction reproduces the worked messages") {
  Scheme scheme = construct(example1_spec());
  CHECK(scheme.s_per_block == 2);
  CHECK(scheme.v->rows() == 0);
  CHECK(*scheme.v_perp == Matrix::identity(f7, 2));

  // X1 = W1 - N1 - 5 N2, X2 = W2 - 6 N1 - 3 N2, X3 = W3 - 3 N1 - N2,
  // X4 = W4 + N1, X5 = W5 + N2.
  Matrix expected = Matrix::from_rows(
      f7, {{-1, -5}, {-6, -3}, {-3, -1}, {1, 0}, {0, 1}});
  CHECK(scheme.masks[0] == expected);
  CHECK((scheme.spec.f * scheme.masks[0]).is_zero());
}

TEST_CASE("example 2 with the reference parts matches the final messages") {
  Scheme scheme = example2_reference_scheme();
  CHECK(scheme.s_per_block == 2);

  // X1 = W1 - 6S1 - 6S2, X2 = W2 - 4S1 - 6S2, X3 = W3 + S1 + S2,
  // X4 = W4 + S1 + 2S2, X5 = W5 + S1, X6 = W6 + S2.
  Matrix expected = Matrix::from_rows(
      f7, {{-6, -6}, {-4, -6}, {1, 1}, {1, 2}, {1, 0}, {0, 1}});
  CHECK(scheme.masks[0] == expected);
  CHECK((scheme.spec.f * scheme.masks[0]).is_zero());
}

TEST_CASE("construct's own choice for example 2 satisfies every property") {
  Scheme scheme = construct(example2_spec());
  CHECK(scheme.s_per_block == 2);
  CHECK(scheme.v->rows() == 2);
  CHECK((*scheme.v * *scheme.v_perp).is_zero());
  CHECK((scheme.spec.f * scheme.masks[0]).is_zero());
}

TEST_CASE("secure summation needs K-1 key symbols") {
  for (int k = 2; k <= 6; ++k) {
    Matrix f(f5, 1, k);
    for (int c = 0; c < k; ++c) f(0, c) = 1;
    AggregationSpec spec = AggregationSpec::make(f5, f, Matrix::identity(f5, k));
    Scheme scheme = construct(spec);
    CHECK(scheme.s_per_block == k - 1);
    RateReport rates = rate_report(scheme);
    CHECK(rates.r == Rational(1));
    CHECK(rates.r_zsigma == Rational(k - 1));
  }
}

TEST_CASE("derive_keys reproduces the worked precoded noise") {
  Scheme scheme = example2_reference_scheme();
  Matrix s = Matrix::from_rows(f7, {{3}, {4}});
  KeyMaterial keys = derive_keys(scheme, s);
  // v_perp * [3; 4] = [0, 4, 3, 4] over F_7 (hand multiplied)
  CHECK(keys.n == Matrix::from_rows(f7, {{0}, {4}, {3}, {4}}));
  // every user is covered at L = 1, and Z_k = mask_k * s
  for (int k = 0; k < 6; ++k) {
    REQUIRE(keys.per_user[k].size() == 1);
    CHECK(keys.per_user[k].blocks == std::vector<int>{0});
    CHECK(keys.per_user[k].symbols[0] == (scheme.masks[0].row(k) * s)(0, 0));
  }
}

TEST_CASE("keygen is deterministic and empty when nothing needs protecting") {
  Scheme scheme = construct(example2_spec());
  KeyMaterial a = keygen(scheme, 42);
  KeyMaterial b = keygen(scheme, 42);
  CHECK(a.s == b.s);
  CHECK(a.n == b.n);
  for (int k = 0; k < 6; ++k) {
    CHECK(a.per_user[k].symbols == b.per_user[k].symbols);
  }
  KeyMaterial c = keygen(scheme, 43);
  CHECK(a.s != c.s);  // overwhelmingly likely for 2 symbols over F_7

  // g inside f's row space: no randomness at all
  AggregationSpec plain = AggregationSpec::make(
      f5, Matrix::from_rows(f5, {{1, 2}}), Matrix::from_rows(f5, {{2, 4}}));
  Scheme plain_scheme = construct(plain);
  CHECK(plain_scheme.s_per_block == 0);
  KeyMaterial keys = keygen(plain_scheme, 7);
  CHECK(keys.s.rows() == 0);
  for (const KeyBlock& kb : keys.per_user) CHECK(kb.size() == 0);
}

TEST_CASE("encode adds the key symbols blockwise") {
  Scheme scheme = three_user_scalar_scheme();
  KeyMaterial keys = derive_keys(scheme, Matrix::from_rows(f5, {{3}}));
  // X1 = W1 uncovered, X2 = W2 + N, X3 = W3 - N
  CHECK(keys.per_user[0].size() == 0);
  CHECK(encode(scheme, 0, row1(f5, {2}), keys.per_user[0]) == row1(f5, {2}));
  CHECK(encode(scheme, 1, row1(f5, {1}), keys.per_user[1]) == row1(f5, {4}));
  CHECK(encode(scheme, 2, row1(f5, {1}), keys.per_user[2]) == row1(f5, {3}));

  CHECK_THROWS_AS(encode(scheme, 0, Matrix(f5, 1, 2), keys.per_user[0]), UsageError);
  CHECK_THROWS_AS(encode(scheme, 9, row1(f5, {1}), keys.per_user[0]), UsageError);
}

TEST_CASE("decode recovers f*W and rejects incomplete transcripts") {
  Scheme scheme = construct(example1_spec());
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix w(f7, 5, 1);
    for (int k = 0; k < 5; ++k) w(k, 0) = rng.residue(7);
    KeyMaterial keys = keygen(scheme, rng.next());
    std::vector<Matrix> messages;
    for (int k = 0; k < 5; ++k) {
      messages.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
    }
    CHECK(decode(scheme, messages) == scheme.spec.f * w);

    std::vector<Matrix> partial(messages.begin(), messages.end() - 1);
    CHECK_THROWS_AS(decode(scheme, partial), UsageError);
  }
}

TEST_CASE("the first decoded row is the X1 + X4 + 5 X5 combination") {
  // With f_tilde's first row equal to [1, 5], noise cancels row-wise:
  // X1 + X4 + 5 X5 = W1 + W4 + 5 W5.
  Scheme scheme = construct(example1_spec());
  Rng rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix w(f7, 5, 1);
    for (int k = 0; k < 5; ++k) w(k, 0) = rng.residue(7);
    KeyMaterial keys = keygen(scheme, rng.next());
    std::vector<Matrix> x;
    for (int k = 0; k < 5; ++k) x.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
    uint32_t combined = f7.add(f7.add(x[0](0, 0), x[3](0, 0)), f7.mul(5, x[4](0, 0)));
    uint32_t inputs = f7.add(f7.add(w(0, 0), w(3, 0)), f7.mul(5, w(4, 0)));
    CHECK(combined == inputs);
  }
}

TEST_CASE("ten thousand random realizations decode correctly on the larger instance") {
  Scheme scheme = construct(example2_spec());
  Rng rng(1);
  for (int trial = 0; trial < 10000; ++trial) {
    Matrix w(f7, 6, 1);
    for (int k = 0; k < 6; ++k) w(k, 0) = rng.residue(7);
    Matrix s(f7, 2, 1);
    s(0, 0) = rng.residue(7);
    s(1, 0) = rng.residue(7);
    KeyMaterial keys = derive_keys(scheme, s);
    std::vector<Matrix> messages;
    for (int k = 0; k < 6; ++k) {
      messages.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
    }
    REQUIRE(decode(scheme, messages) == scheme.spec.f * w);
  }
}

TEST_CASE("decode of all-zero inputs is zero regardless of the noise") {
  Scheme scheme = construct(example2_spec());
  for (uint64_t seed : {0ull, 1ull, 99ull}) {
    KeyMaterial keys = keygen(scheme, seed);
    std::vector<Matrix> messages;
    for (int k = 0; k < 6; ++k) {
      messages.push_back(encode(scheme, k, Matrix(f7, 1, 1), keys.per_user[k]));
    }
    CHECK(decode(scheme, messages) == Matrix(f7, 2, 1));
  }
}

TEST_CASE("block replication keeps rates and correctness for L > 1") {
  Scheme scheme = construct(example2_spec(3));
  CHECK(scheme.total_key_symbols() == 6);
  RateReport rates = rate_report(scheme);
  CHECK(rates.r_zsigma == Rational(2));
  CHECK(rates.r_z_max == Rational(1));

  Rng rng(31);
  Matrix w(f7, 6, 3);
  for (int k = 0; k < 6; ++k) {
    for (int b = 0; b < 3; ++b) w(k, b) = rng.residue(7);
  }
  KeyMaterial keys = keygen(scheme, 5);
  std::vector<Matrix> messages;
  for (int k = 0; k < 6; ++k) {
    messages.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
  }
  CHECK(decode(scheme, messages) == scheme.spec.f * w);
}

TEST_CASE("the symmetrized three-user scheme has rate 2/3 per user") {
  Scheme scheme = symmetrized_three_user(f5);
  CHECK(scheme.spec.len == 3);
  CHECK(scheme.s_per_block == 1);
  CHECK(scheme.masks.size() == 3);
  // block 1 is the scalar scheme exactly: X1 = W1, X2 = W2 + N, X3 = W3 - N
  CHECK(scheme.masks[0] == Matrix::from_rows(f5, {{0}, {1}, {-1}}));

  RateReport rates = rate_report(scheme);
  CHECK(rates.r_zsigma == Rational(1));
  for (int k = 0; k < 3; ++k) {
    CHECK(rates.r_z[k] == Rational(2, 3));
    CHECK(covered_blocks(scheme, k).size() == 2);
  }

  // correctness across blocks
  Rng rng(77);
  Matrix w(f5, 3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int b = 0; b < 3; ++b) w(k, b) = rng.residue(5);
  }
  KeyMaterial keys = keygen(scheme, 3);
  std::vector<Matrix> messages;
  for (int k = 0; k < 3; ++k) {
    messages.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
  }
  CHECK(decode(scheme, messages) == scheme.spec.f * w);

  CHECK_THROWS_AS(symmetrized_three_user(Field(3)), UsageError);
}

TEST_CASE("permuted instances place mask rows by original user identity") {
  // leading columns dependent: normalization must permute, and users keep
  // their original indices everywhere downstream
  Matrix f = Matrix::from_rows(f5, {{1, 2, 1}, {2, 4, 1}});
  AggregationSpec spec = AggregationSpec::make(f5, f, Matrix::identity(f5, 3), 1);
  Scheme scheme = construct(spec);
  REQUIRE(scheme.norm.perm == std::vector<int>{0, 2, 1});

  // permuted view: rows 1..M are -f_tilde * v_perp, the rest are v_perp
  Matrix top = (scheme.norm.f_tilde * *scheme.v_perp).negated();
  Matrix bottom = *scheme.v_perp;
  for (int j = 0; j < 3; ++j) {
    const Matrix& expect = j < 2 ? top : bottom;
    int row = j < 2 ? j : j - 2;
    for (int c = 0; c < scheme.masks[0].cols(); ++c) {
      CHECK(scheme.masks[0](scheme.norm.perm[j], c) == expect(row, c));
    }
  }
  CHECK((f * scheme.masks[0]).is_zero());

  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix w(f5, 3, 1);
    for (int k = 0; k < 3; ++k) w(k, 0) = rng.residue(5);
    KeyMaterial keys = keygen(scheme, rng.next());
    std::vector<Matrix> messages;
    for (int k = 0; k < 3; ++k) {
      messages.push_back(encode(scheme, k, w.row(k), keys.per_user[k]));
    }
    CHECK(decode(scheme, messages) == f * w);
  }
}

TEST_CASE("rate report marks unmasked users") {
  Scheme scheme = three_user_scalar_scheme();
  RateReport rates = rate_report(scheme);
  CHECK(rates.r_z == std::vector<Rational>{Rational(0), Rational(1), Rational(1)});
  CHECK(rates.r_z_max == Rational(1));
  CHECK(rates.r_zsigma == Rational(1));
}

TEST_CASE("scheme mutations") {
  Scheme scheme = construct(example2_spec());
  Scheme dropped = drop_key_symbol(scheme, 1);
  CHECK(dropped.s_per_block == 1);
  CHECK(dropped.masks[0].cols() == 1);
  CHECK((dropped.spec.f * dropped.masks[0]).is_zero());

  Scheme corrupted = corrupt_mask_entry(scheme, 0, 0, 1);
  CHECK_FALSE((corrupted.spec.f * corrupted.masks[0]).is_zero());
  CHECK_THROWS_AS(drop_key_symbol(scheme, 5), UsageError);
}

TEST_CASE("noise cancels for random instances up to seven users") {
  Rng rng(2718);
  int built = 0;
  while (built < 300) {
    Field field(std::vector<uint32_t>{2, 3, 5, 7}[rng.next() % 4]);
    int k = 2 + static_cast<int>(rng.next() % 6);  // up to K = 7
    int m = 1 + static_cast<int>(rng.next() % k);
    int n = 1 + static_cast<int>(rng.next() % k);
    Matrix f(field, m, k), g(field, n, k);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < k; ++c) f(r, c) = rng.residue(field.q());
    }
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < k; ++c) g(r, c) = rng.residue(field.q());
    }
    std::optional<AggregationSpec> spec;
    try {
      spec = AggregationSpec::make(field, f, g, 1);
    } catch (const UsageError&) {
      continue;
    }
    Scheme scheme = construct(*spec);
    CHECK((f * scheme.masks[0]).is_zero());
    CHECK(scheme.s_per_block == conditional_rank(f, g));
    ++built;
  }
}

TEST_CASE("export and import round-trip behavior") {
  AggregationSpec spec = example2_spec();
  Scheme scheme = construct(spec);
  std::string text = export_scheme(scheme);
  CHECK(text.rfind("vecagg-scheme v1\n", 0) == 0);
  CHECK(text.find("q=7 K=6 M=2 L=1 LZS=2") != std::string::npos);

  Scheme loaded = import_scheme(text, spec);
  CHECK(loaded.masks[0] == scheme.masks[0]);
  CHECK(loaded.norm.perm == scheme.norm.perm);
  KeyMaterial a = keygen(scheme, 12), b = keygen(loaded, 12);
  CHECK(a.s == b.s);
  for (int k = 0; k < 6; ++k) CHECK(a.per_user[k].symbols == b.per_user[k].symbols);

  // imports are validated against the instance
  AggregationSpec other = example1_spec();
  CHECK_THROWS_AS(import_scheme(text, other), UsageError);
  CHECK_THROWS_AS(import_scheme("garbage", spec), ParseError);

  // the symmetrized bundle is not expressible in the export format
  CHECK_THROWS_AS(export_scheme(symmetrized_three_user(f5)), UsageError);
}
