#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vecagg/linalg.hpp"
#include "vecagg/rational.hpp"

namespace vecagg {

/// A problem instance: the server must recover f*W while learning nothing
/// about g*W beyond that, over F_q, with `len` input symbols per user.
struct AggregationSpec {
  Field field;
  Matrix f;  // M x K computation matrix, full row rank, no zero columns
  Matrix g;  // N x K protection matrix, full row rank
  int len;   // symbols per user input

  int users() const { return f.cols(); }
  int m() const { return f.rows(); }
  int n() const { return g.rows(); }

  /// Validates all instance invariants and returns the instance.
  static AggregationSpec make(const Field& field, const Matrix& f, const Matrix& g,
                              int len = 1);
};

/// One user's key: the combined mask value for each input block the user
/// must cover. Uncovered blocks carry no key symbol at all.
struct KeyBlock {
  std::vector<uint32_t> symbols;
  std::vector<int> blocks;  // covered block indices, ascending

  int size() const { return static_cast<int>(symbols.size()); }
};

struct KeyMaterial {
  Matrix s;                        // source noise, s_per_block x len
  Matrix n;                        // precoded noise v_perp * s; 0 x len when n/a
  std::vector<KeyBlock> per_user;  // one entry per user
};

struct RateReport {
  Rational r;                 // message symbols per input symbol
  Rational r_zsigma;          // source key symbols per input symbol
  std::vector<Rational> r_z;  // per-user key symbols per input symbol
  Rational r_z_max;
};

/// A compiled protocol. Messages are X_k = W_k + Z_k where user k's mask
/// row (per block) gives the coefficients combining the source noise S.
/// The one structural guarantee everything else rests on: f * mask = 0 for
/// every block, so decoding cancels all noise exactly.
struct Scheme {
  AggregationSpec spec;
  Normalization norm;
  std::optional<Matrix> v;       // completion rows; standard construction only
  std::optional<Matrix> v_perp;  // noise precoder; standard construction only
  std::vector<Matrix> masks;     // one shared mask, or one per block
  int s_per_block;               // source symbols per input block

  bool uniform_mask() const { return masks.size() == 1; }
  const Matrix& mask_for_block(int b) const {
    return masks.size() == 1 ? masks[0] : masks[static_cast<size_t>(b)];
  }
  uint64_t total_key_symbols() const {
    return static_cast<uint64_t>(s_per_block) * spec.len;
  }
};

/// Validates the parts of a standard-construction scheme (stack rank,
/// v * v_perp = 0, precoder rank) and assembles masks from them. Accepts
/// any parts satisfying the defining properties, not just the ones
/// construct() picks.
Scheme assemble(const AggregationSpec& spec, const Normalization& norm, Matrix v,
                Matrix v_perp);

/// Compiles the randomness-optimal scheme for an instance: normalize f,
/// complete the row space, precode noise along the completion's right
/// kernel. Uses rank([f;g]) - rank(f) source symbols per input block.
Scheme construct(const AggregationSpec& spec);

/// The three-block symmetrized scheme for the instance f = [1 1 1],
/// g = [1 2 3] over F_q (q >= 5): in block b user b sends in the clear and
/// the other two users mask with +/- the block's noise symbol. Each user
/// covers two of three blocks. The constructor verifies each block's
/// security exhaustively and throws ConstructionError if that fails.
Scheme symmetrized_three_user(const Field& field);

/// Expands source noise into per-user keys: n = v_perp * s and
/// Z_k = mask_k * s, blockwise.
KeyMaterial derive_keys(const Scheme& scheme, const Matrix& s);

/// derive_keys on source noise drawn uniformly from a seeded generator.
KeyMaterial keygen(const Scheme& scheme, uint64_t seed);

/// X_k = W_k + Z_k. Depends on this user's input and key only.
Matrix encode(const Scheme& scheme, int user, const Matrix& w_row, const KeyBlock& key);

/// Recovers f*W from all K messages; throws UsageError when any message is
/// missing or misshapen (no partial decoding).
Matrix decode(const Scheme& scheme, const std::vector<Matrix>& messages);

RateReport rate_report(const Scheme& scheme);

/// Block indices user `user` covers (where its mask row is nonzero).
std::vector<int> covered_blocks(const Scheme& scheme, int user);

/// Removes source-key coordinate `index` from every block mask. The result
/// still decodes correctly but carries one fewer key symbol; with
/// rank(g|f) >= 1 it must fail the security check.
Scheme drop_key_symbol(const Scheme& scheme, int index);

/// Adds delta to one mask entry (every block). Breaks noise cancellation.
Scheme corrupt_mask_entry(const Scheme& scheme, int user, int col, uint32_t delta);

/// Text export of a standard-construction scheme.
std::string export_scheme(const Scheme& scheme);

/// Parses an exported scheme and revalidates it against the instance the
/// export was built for (the export does not carry f and g).
Scheme import_scheme(const std::string& text, const AggregationSpec& spec);

}  // namespace vecagg
