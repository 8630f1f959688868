#pragma once

#include <cstdint>
#include <random>

namespace vecagg {

/// splitmix64 step; used to derive independent per-round seeds.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic uniform residues. mt19937_64 has a fixed standard
/// definition and the rejection step below avoids the
/// implementation-defined std distributions, so streams are identical
/// across platforms and compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  uint32_t residue(uint32_t q) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % q;
    uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return static_cast<uint32_t>(v % q);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace vecagg
