#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vecagg/scheme.hpp"

namespace vecagg {

/// One protocol message. Senders: 0 = dealer, 1..K = users, K+1 = server.
/// Kinds: 0 = key dispatch, 1 = user message, 2 = decoded result.
struct Frame {
  uint32_t round = 0;
  uint16_t sender = 0;
  uint8_t kind = 0;
  std::vector<uint32_t> payload;

  bool operator==(const Frame& other) const = default;
};

inline constexpr uint8_t kFrameKeyDispatch = 0;
inline constexpr uint8_t kFrameMessage = 1;
inline constexpr uint8_t kFrameResult = 2;

/// Wire layout, little endian: round u32, sender u16, kind u8, count u32,
/// then count u32 payload elements. 11 + 4 * count bytes total.
std::vector<uint8_t> serialize_frame(const Frame& frame);

/// Strict inverse of serialize_frame for one whole buffer. Throws
/// ParseError naming the byte offset for truncation, an unknown kind,
/// payload elements >= q, or trailing bytes.
Frame parse_frame(const std::vector<uint8_t>& bytes, const Field& field);

/// Everything observable from one protocol round: the frames in
/// transmission order, what the server decoded, and the ground truth.
struct RunLog {
  uint32_t round = 0;
  uint64_t seed = 0;
  std::vector<Frame> frames;
  Matrix decoded;
  Matrix truth;

  RunLog(const Field& field, int m, int len)
      : decoded(field, m, len), truth(field, m, len) {}
};

/// Text export: one `round=.. user=.. X=..` line per user message, then
/// `decoded=` and `truth=` lines.
std::string render(const RunLog& log);

/// Drives one round over in-memory channels in dealer -> users -> server
/// order. Every dealer-to-user channel is disjoint: user k sees exactly
/// its own key frame, never the source noise or another user's anything.
RunLog run_round(const Scheme& scheme, const Matrix& w, uint64_t seed,
                 uint32_t round = 0);

struct RunSummary {
  int rounds = 0;
  int passed = 0;
  uint64_t message_symbols = 0;

  bool all_passed() const { return rounds == passed; }
};

/// Simulates `rounds` rounds with fresh inputs and noise each round,
/// seeded deterministically from `seed`.
RunSummary run_many(const Scheme& scheme, int rounds, uint64_t seed);

}  // namespace vecagg
