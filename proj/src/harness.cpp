#include "vecagg/harness.hpp"

#include <sstream>

#include "vecagg/rng.hpp"

namespace vecagg {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t at) {
  return static_cast<uint32_t>(in[at]) | static_cast<uint32_t>(in[at + 1]) << 8 |
         static_cast<uint32_t>(in[at + 2]) << 16 | static_cast<uint32_t>(in[at + 3]) << 24;
}

}  // namespace

std::vector<uint8_t> serialize_frame(const Frame& frame) {
  std::vector<uint8_t> out;
  out.reserve(11 + 4 * frame.payload.size());
  put_u32(out, frame.round);
  out.push_back(static_cast<uint8_t>(frame.sender));
  out.push_back(static_cast<uint8_t>(frame.sender >> 8));
  out.push_back(frame.kind);
  put_u32(out, static_cast<uint32_t>(frame.payload.size()));
  for (uint32_t v : frame.payload) put_u32(out, v);
  return out;
}

Frame parse_frame(const std::vector<uint8_t>& bytes, const Field& field) {
  if (bytes.size() < 11) {
    throw ParseError("truncated frame header", -1, static_cast<long>(bytes.size()));
  }
  Frame frame;
  frame.round = get_u32(bytes, 0);
  frame.sender = static_cast<uint16_t>(bytes[4] | bytes[5] << 8);
  frame.kind = bytes[6];
  if (frame.kind > kFrameResult) {
    throw ParseError("unknown frame kind " + std::to_string(frame.kind), -1, 6);
  }
  uint32_t count = get_u32(bytes, 7);
  size_t expected = 11 + static_cast<size_t>(count) * 4;
  if (bytes.size() < expected) {
    throw ParseError("truncated payload, need " + std::to_string(expected) + " bytes", -1,
                     static_cast<long>(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw ParseError("trailing bytes after frame", -1, static_cast<long>(expected));
  }
  frame.payload.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    size_t at = 11 + static_cast<size_t>(i) * 4;
    uint32_t v = get_u32(bytes, at);
    if (v >= field.q()) {
      throw ParseError("payload element " + std::to_string(v) + " >= q", -1,
                       static_cast<long>(at));
    }
    frame.payload.push_back(v);
  }
  return frame;
}

namespace {

// Actor states hold exactly what the model grants each party. A user's
// entire world is its index, its input row, and the one key frame it was
// dealt; there is nowhere for the source noise or a peer's key to live.
struct UserActor {
  int index;        // 0-based
  Matrix input;     // 1 x L
  KeyBlock key;

  Frame message(const Scheme& scheme, uint32_t round) const {
    Matrix x = encode(scheme, index, input, key);
    Frame frame;
    frame.round = round;
    frame.sender = static_cast<uint16_t>(index + 1);
    frame.kind = kFrameMessage;
    for (int b = 0; b < x.cols(); ++b) frame.payload.push_back(x(0, b));
    return frame;
  }
};

}  // namespace

std::string render(const RunLog& log) {
  std::ostringstream out;
  for (const Frame& frame : log.frames) {
    if (frame.kind != kFrameMessage) continue;
    out << "round=" << frame.round << " user=" << frame.sender << " X=";
    for (size_t i = 0; i < frame.payload.size(); ++i) {
      if (i) out << ' ';
      out << frame.payload[i];
    }
    out << '\n';
  }
  auto emit = [&out](const char* label, const Matrix& m) {
    out << label;
    bool first = true;
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) {
        if (!first) out << ' ';
        out << m(r, c);
        first = false;
      }
    }
    out << '\n';
  };
  emit("decoded=", log.decoded);
  emit("truth=", log.truth);
  return out.str();
}

RunLog run_round(const Scheme& scheme, const Matrix& w, uint64_t seed, uint32_t round) {
  const AggregationSpec& spec = scheme.spec;
  if (w.field() != spec.field || w.rows() != spec.users() || w.cols() != spec.len) {
    throw UsageError("inputs must be a " + std::to_string(spec.users()) + "x" +
                     std::to_string(spec.len) + " matrix");
  }

  RunLog log(spec.field, spec.m(), spec.len);
  log.round = round;
  log.seed = seed;

  // Dealer: draw the source noise, dispatch each user's key on its own
  // channel. Key frames never aggregate, so a user cannot see a peer's.
  KeyMaterial keys = keygen(scheme, seed);
  std::vector<std::vector<Frame>> user_channel(spec.users());
  for (int k = 0; k < spec.users(); ++k) {
    Frame frame;
    frame.round = round;
    frame.sender = 0;
    frame.kind = kFrameKeyDispatch;
    frame.payload = keys.per_user[k].symbols;
    user_channel[k].push_back(frame);
    log.frames.push_back(std::move(frame));
  }

  // Users: each consumes exactly its own key frame and emits one message.
  std::vector<Frame> server_channel;
  for (int k = 0; k < spec.users(); ++k) {
    if (user_channel[k].size() != 1 || user_channel[k][0].kind != kFrameKeyDispatch) {
      throw InternalError("user channel discipline violated");
    }
    UserActor actor{k, w.row(k), KeyBlock{user_channel[k][0].payload, covered_blocks(scheme, k)}};
    if (actor.key.symbols.size() != actor.key.blocks.size()) {
      throw InternalError("key frame does not match this user's coverage");
    }
    server_channel.push_back(actor.message(scheme, round));
    log.frames.push_back(server_channel.back());
  }

  // Server: decode from the K message frames alone.
  std::vector<Matrix> messages;
  for (const Frame& frame : server_channel) {
    if (frame.kind != kFrameMessage) {
      throw InternalError("server channel discipline violated");
    }
    Matrix x(spec.field, 1, spec.len);
    for (int b = 0; b < spec.len; ++b) x(0, b) = frame.payload[b];
    messages.push_back(std::move(x));
  }
  log.decoded = decode(scheme, messages);

  Frame result;
  result.round = round;
  result.sender = static_cast<uint16_t>(spec.users() + 1);
  result.kind = kFrameResult;
  for (int r = 0; r < log.decoded.rows(); ++r) {
    for (int c = 0; c < log.decoded.cols(); ++c) result.payload.push_back(log.decoded(r, c));
  }
  log.frames.push_back(std::move(result));

  log.truth = spec.f * w;
  return log;
}

RunSummary run_many(const Scheme& scheme, int rounds, uint64_t seed) {
  if (rounds < 1) throw UsageError("round count must be >= 1");
  const AggregationSpec& spec = scheme.spec;

  RunSummary summary;
  summary.rounds = rounds;
  for (int r = 0; r < rounds; ++r) {
    Rng w_rng(mix_seed(seed, 2 * static_cast<uint64_t>(r)));
    Matrix w(spec.field, spec.users(), spec.len);
    for (int k = 0; k < spec.users(); ++k) {
      for (int b = 0; b < spec.len; ++b) w(k, b) = w_rng.residue(spec.field.q());
    }
    RunLog log = run_round(scheme, w, mix_seed(seed, 2 * static_cast<uint64_t>(r) + 1),
                           static_cast<uint32_t>(r));
    if (log.decoded == log.truth) ++summary.passed;
    summary.message_symbols += static_cast<uint64_t>(spec.users()) * spec.len;
  }
  return summary;
}

}  // namespace vecagg
