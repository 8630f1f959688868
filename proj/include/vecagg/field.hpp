#pragma once

#include <cstdint>

#include "vecagg/errors.hpp"

namespace vecagg {

/// Prime field F_q: the modulus plus exact arithmetic on canonical
/// residues in [0, q). Primality is checked at construction by trial
/// division, and q is capped below 2^31 so every product fits a 64-bit
/// intermediate.
class Field {
 public:
  explicit Field(uint32_t q);

  uint32_t q() const { return q_; }

  bool operator==(const Field& other) const { return q_ == other.q_; }
  bool operator!=(const Field& other) const { return q_ != other.q_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % q_);
  }
  uint32_t pow(uint32_t a, uint64_t e) const;

  /// Multiplicative inverse, by Fermat exponentiation. Throws UsageError
  /// for a = 0.
  uint32_t inv(uint32_t a) const;

  /// Canonical residue of an arbitrary signed integer.
  uint32_t reduce(long long v) const {
    long long r = v % static_cast<long long>(q_);
    if (r < 0) r += q_;
    return static_cast<uint32_t>(r);
  }

 private:
  uint32_t q_;
};

/// A residue tagged with its field. Operations on two elements require
/// the fields to match and always return canonical representatives.
struct FieldElement {
  Field field;
  uint32_t value;

  FieldElement(Field f, uint32_t v) : field(f), value(v) {
    if (value >= field.q()) throw UsageError("field element out of range");
  }
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement mul(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement inv(const FieldElement& a);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return add(a, b);
}
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return mul(a, b);
}
inline FieldElement operator-(const FieldElement& a) { return neg(a); }
inline bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field == b.field && a.value == b.value;
}

}  // namespace vecagg
