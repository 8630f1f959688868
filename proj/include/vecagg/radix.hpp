#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace vecagg {

/// q^e without overflow; nullopt when the result exceeds uint64_t.
inline std::optional<uint64_t> checked_pow(uint64_t q, int e) {
  uint64_t acc = 1;
  for (int i = 0; i < e; ++i) {
    if (acc > UINT64_MAX / q) return std::nullopt;
    acc *= q;
  }
  return acc;
}

/// Mixed-radix view of realization indices: `digits` base-q digits, least
/// significant first.
struct Radix {
  uint32_t q = 2;
  int digits = 0;
  uint64_t size = 1;
  std::vector<uint64_t> weight;  // weight[d] = q^d

  Radix() = default;
  Radix(uint32_t q_, int digits_) : q(q_), digits(digits_) {
    weight.resize(digits);
    uint64_t w = 1;
    for (int d = 0; d < digits; ++d) {
      weight[d] = w;
      w *= q;
    }
    size = w;
  }

  uint64_t index(const std::vector<uint32_t>& ds) const {
    uint64_t idx = 0;
    for (int d = 0; d < digits; ++d) idx += ds[d] * weight[d];
    return idx;
  }

  void decompose(uint64_t idx, std::vector<uint32_t>& out) const {
    out.assign(digits, 0);
    for (int d = 0; d < digits; ++d) {
      out[d] = static_cast<uint32_t>(idx % q);
      idx /= q;
    }
  }
};

}  // namespace vecagg
