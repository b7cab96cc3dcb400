#include "rsmm/field.hpp"

#include <array>
#include <string>

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<uint128_t>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

// Deterministic Miller-Rabin; these witnesses cover every 64-bit integer.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> kWitnesses = {2,  3,  5,  7,  11, 13,
                                                        17, 19, 23, 29, 31, 37};
  for (auto p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : kWitnesses) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
  if (q >= (std::uint64_t{1} << 63) || !is_prime(q)) {
    throw NotPrime("modulus " + std::to_string(q) +
                   " is not a prime below 2^63");
  }
}

Residue PrimeField::pow(Residue base, std::uint64_t exp) const noexcept {
  return powmod(base, exp, q_);
}

Residue PrimeField::inv(Residue a) const {
  a %= q_;
  if (a == 0) throw DivisionByZero("inverse of zero in F_" + std::to_string(q_));
  // Fermat: a^(q-2) = a^-1 for prime q.
  return powmod(a, q_ - 2, q_);
}

}  // namespace rsmm
