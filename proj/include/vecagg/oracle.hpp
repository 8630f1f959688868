#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vecagg/radix.hpp"
#include "vecagg/rational.hpp"
#include "vecagg/scheme.hpp"

namespace vecagg::oracle {

struct Options {
  uint64_t budget = 100'000'000;  // maximum number of (W, S) realizations
  int threads = 0;                // 0 = all hardware threads
};

enum class Status { Pass, Fail, Indeterminate };

struct CheckResult {
  Status status = Status::Pass;
  std::string witness;  // realization digits and counts; empty when passing
};

struct LeakageResult {
  Status status = Status::Pass;
  int64_t mi = 0;     // I(X;W) in q-ary units
  int64_t bound = 0;  // (K - rank(g|f)) * L
  std::string witness;
};

struct PerUserResult {
  int user = 0;  // 0-based
  Status status = Status::Pass;
  Rational entropy;  // H(X_u | (W_j, Z_j) for j != u), q-ary units
  int64_t bound = 0;
  std::string witness;
};

struct TotalKeyResult {
  Status status = Status::Pass;
  int64_t key_entropy = 0;  // H(S)
  int64_t cond_rank = 0;    // rank(g|f)
  int64_t required = 0;     // rank(g|f) * L
  std::string witness;
};

/// Exact integer counts over every (W, S) realization, together with the
/// verified linear decomposition the checks stream against.
///
/// Realizations are mixed-radix indices, least significant digit first:
/// W and X use digit (user * L + block), S uses (symbol * L + block).
/// Because (F, G) realizations occupy only the row space of [f; g], they
/// are counted in rank-reduced coordinates c = basis * W with
/// f = comb_f * c and g = comb_g * c; that keeps every table dense and no
/// larger than the X space. The finest table N(f,g,x) is never stored:
/// check_security re-derives each x's slice from the per-s noise model,
/// which is itself produced by the real keygen/encode path and cross
/// checked against it on sampled realizations.
struct TranscriptCounts {
  Scheme scheme;
  uint32_t q = 2;
  int kl = 0, sl = 0, ml = 0, nl = 0, rl = 0;  // digits per realization kind
  Radix xr, sr, fr, cr;
  uint64_t total = 0;
  int cond_rank = 0;  // rank(g | f)

  std::vector<uint64_t> n_x;  // by X index
  std::vector<uint64_t> n_c;  // by rank-reduced (F,G) index
  std::vector<uint64_t> n_f;  // by F index
  std::vector<uint64_t> n_s;  // by S index

  Matrix basis;   // r x K row basis of [f; g]
  Matrix comb_f;  // f = comb_f * basis
  Matrix comb_g;  // g = comb_g * basis
  std::vector<uint32_t> f_of_c;

  // Per-s linear model from the real key derivation and encoders.
  std::vector<std::vector<uint32_t>> noise_digits;  // x offset, kl digits
  std::vector<std::vector<uint32_t>> basis_noise;   // rl digits
  std::vector<uint8_t> f_noise_zero;                // f * noise(s) == 0
  std::vector<std::vector<uint32_t>> key_symbols;   // all users' symbols, flattened
  std::vector<int> key_offsets;                     // user -> offset, size K+1

  Matrix decode_map;  // probed from the real decoder; equals f iff correct

  uint64_t noise_support = 0;  // distinct noise(s) values
  bool noise_uniform = true;   // equal multiplicity across distinct values

  // c support sorted by (f index, c index), grouped per f.
  std::vector<uint64_t> csr_c;
  std::vector<uint64_t> csr_begin;  // size f_space + 1

  TranscriptCounts(Scheme s, Options o)
      : scheme(std::move(s)),
        basis(scheme.spec.field, 0, 0),
        comb_f(scheme.spec.field, 0, 0),
        comb_g(scheme.spec.field, 0, 0),
        decode_map(scheme.spec.field, 0, 0),
        options(o) {}
  Options options;
};

/// Enumerates all q^(K*L + LZS*L) realizations and fills every table.
/// Refuses with BudgetError when the state space exceeds options.budget.
TranscriptCounts enumerate_joint(const Scheme& scheme, const Options& options = {});

/// decode(X) == f*W for every realization.
CheckResult check_correctness(const TranscriptCounts& counts);

/// The exact factorization identity N(f,g,x) * N(f) == N(f,g) * N(f,x)
/// for every realization triple; integer-equivalent to I(G; X | F) = 0.
CheckResult check_security(const TranscriptCounts& counts);

/// I(X;W) <= (K - rank(g|f)) * L, computed from uniform-over-support
/// distributions; flags Indeterminate if a distribution is not uniform.
LeakageResult check_leakage_bound(const TranscriptCounts& counts);

/// H(X_u | everyone else's inputs and keys) >= L for each user.
std::vector<PerUserResult> check_per_user_bound(const TranscriptCounts& counts);

/// H(S) equals the scheme's key symbol count and covers rank(g|f) * L.
TotalKeyResult check_total_key_bound(const TranscriptCounts& counts);

struct VerificationReport {
  CheckResult correctness;
  CheckResult security;
  LeakageResult leakage;
  std::vector<PerUserResult> per_user;
  TotalKeyResult total_key;

  bool all_pass() const;
};

VerificationReport run_all_checks(const Scheme& scheme, const Options& options = {});

/// One line per check, `witness:` block after any failing line.
std::string render(const VerificationReport& report);

}  // namespace vecagg::oracle
