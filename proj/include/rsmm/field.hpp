#pragma once

#include <cstdint>

namespace rsmm {

using Residue = std::uint64_t;

__extension__ using uint128_t = unsigned __int128;
__extension__ using int128_t = __int128;

bool is_prime(std::uint64_t n);

// Arithmetic in F_q for a runtime prime q < 2^63. Products go through a
// 128-bit intermediate so no operation overflows.
class PrimeField {
 public:
  // Throws NotPrime unless q is a prime below 2^63.
  explicit PrimeField(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }

  Residue reduce(std::uint64_t v) const noexcept { return v % q_; }
  Residue add(Residue a, Residue b) const noexcept {
    Residue s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + (q_ - b);
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(static_cast<uint128_t>(a) * b % q_);
  }
  Residue pow(Residue base, std::uint64_t exp) const noexcept;
  // Throws DivisionByZero for a == 0.
  Residue inv(Residue a) const;

  bool operator==(const PrimeField& other) const noexcept = default;

 private:
  std::uint64_t q_;
};

}  // namespace rsmm
