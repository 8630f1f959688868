#include "vecagg/field.hpp"

namespace vecagg {

namespace {

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (uint32_t d = 3; static_cast<uint64_t>(d) * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

Field::Field(uint32_t q) : q_(q) {
  if (q >= (1u << 31)) {
    throw UsageError("modulus " + std::to_string(q) + " too large (must be < 2^31)");
  }
  if (!is_prime(q)) {
    throw UsageError("modulus " + std::to_string(q) + " is not prime");
  }
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
  uint64_t base = a % q_;
  uint64_t acc = 1;
  while (e > 0) {
    if (e & 1) acc = acc * base % q_;
    base = base * base % q_;
    e >>= 1;
  }
  return static_cast<uint32_t>(acc);
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) throw UsageError("division by zero in F_" + std::to_string(q_));
  return pow(a, q_ - 2);
}

namespace {

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field != b.field) {
    throw UsageError("field mismatch: F_" + std::to_string(a.field.q()) +
                     " vs F_" + std::to_string(b.field.q()));
  }
}

}  // namespace

FieldElement add(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field, a.field.add(a.value, b.value)};
}

FieldElement mul(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  return {a.field, a.field.mul(a.value, b.value)};
}

FieldElement neg(const FieldElement& a) {
  return {a.field, a.field.neg(a.value)};
}

FieldElement inv(const FieldElement& a) {
  return {a.field, a.field.inv(a.value)};
}

}  // namespace vecagg
