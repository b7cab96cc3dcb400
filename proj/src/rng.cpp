#include "rsmm/rng.hpp"

#include <limits>

namespace rsmm {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix(seed_ + counter_ * kGamma);
}

Residue CounterRng::uniform_residue(std::uint64_t q) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Largest multiple of q that fits, minus one; draws above it are rejected.
  const std::uint64_t limit = kMax - (kMax % q + 1) % q;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= limit) return v % q;
  }
}

double CounterRng::uniform_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix(seed ^ mix(stream + kGamma));
}

}  // namespace rsmm
