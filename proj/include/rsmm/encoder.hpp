#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rsmm/matrix.hpp"
#include "rsmm/plan.hpp"
#include "rsmm/rng.hpp"

namespace rsmm {

enum class Role { kA, kB, kAB };
const char* to_string(Role role);

// A batch of m equally shaped matrices.
struct MatrixSeq {
  Role role = Role::kA;
  std::vector<FieldMatrix> items;

  std::size_t size() const { return items.size(); }
  bool operator==(const MatrixSeq&) const = default;
};

// Checks item count and that every item is rows x cols. Throws ShapeError.
void check_seq(const MatrixSeq& seq, std::size_t count, std::size_t rows, std::size_t cols);

MatrixSeq random_seq(Role role, const PrimeField& field, std::size_t count,
                     std::size_t rows, std::size_t cols, CounterRng& rng);

// Masks R_(s,r) for the masked part, ordered by block, slot within the
// block (padding included), then r. Each mask is (C/L) x D.
struct RandomnessPool {
  std::uint64_t seed = 0;
  std::vector<FieldMatrix> masks;

  std::size_t residues() const;
};

struct ServerShares {
  std::size_t server = 0;  // 1-based
  // One share per slot of slot_layout(plan).
  std::vector<FieldMatrix> items;
};

struct SharePackage {
  BlockPlan plan;
  std::vector<ServerShares> servers;
  std::size_t randomness_consumed = 0;  // residues
};

// Splits a C x D matrix into `parts` stacked (C/parts) x D slices.
std::vector<FieldMatrix> split_vertical(const FieldMatrix& m, std::size_t parts);

// Number of mask residues the plan consumes.
std::size_t pool_size(const BlockPlan& plan);

// Empty for case 1 plans, which use no randomness.
RandomnessPool draw_randomness(const BlockPlan& plan, std::uint64_t seed);
// All-zero pool of the right shape. Used by audits and linearity checks.
RandomnessPool zero_randomness(const BlockPlan& plan);

SharePackage encode_case1(const MatrixSeq& a, const BlockPlan& plan);
SharePackage encode_case2(const MatrixSeq& a, const RandomnessPool& pool, const BlockPlan& plan);
// Dispatches on the plan's case; `pool` is ignored in case 1.
SharePackage encode(const MatrixSeq& a, const RandomnessPool& pool, const BlockPlan& plan);

// Lays a public batch out in slot order, with zero matrices in padded slots.
std::vector<FieldMatrix> align_to_slots(const MatrixSeq& seq, const BlockPlan& plan,
                                        std::size_t rows, std::size_t cols);

}  // namespace rsmm
