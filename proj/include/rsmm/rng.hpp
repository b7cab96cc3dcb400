#pragma once

#include <cstdint>

#include "rsmm/field.hpp"

namespace rsmm {

// Counter-mode generator: word n is splitmix64's finalizer applied to
// seed + n * golden_gamma. Stateless apart from the counter, so a stream is
// fully determined by (seed, position).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  // Uniform residue in [0, q) by rejection sampling (no modulo bias).
  Residue uniform_residue(std::uint64_t q);
  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform_unit();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Derives an independent stream seed from a master seed and a stream label.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rsmm
