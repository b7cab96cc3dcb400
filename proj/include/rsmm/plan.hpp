#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rsmm/field.hpp"
#include "rsmm/matrix.hpp"
#include "rsmm/rational.hpp"

namespace rsmm {

// Scheme parameters. `l` is the collusion bound, `alpha` the tolerated
// leakage fraction for any l colluding servers.
struct Params {
  std::size_t N = 0;
  std::size_t k = 0;
  std::size_t l = 0;
  Rational alpha{0};
  std::uint64_t q = 0;
  std::size_t C = 0;
  std::size_t D = 0;
  std::size_t E = 0;
  std::size_t m = 0;
  // Optional override of the evaluation points; defaults to x_i = i.
  std::vector<Residue> points;

  bool operator==(const Params&) const = default;
};

enum class SchemeCase { kCase1, kCase2 };

// Part of the batch a block belongs to. Case 1 has a single plain part;
// Case 2 has a plain part P and a masked part P-bar.
enum class Part { kPlain, kMasked };

const char* to_string(SchemeCase c);
const char* to_string(Part p);

// Layout of one part of the batch: which A_s it covers, how it is blocked,
// and how many zero matrices complete the final block.
struct PartPlan {
  Part kind = Part::kPlain;
  std::size_t offset = 0;      // index of the first A_s covered
  std::size_t genuine = 0;     // number of real matrices in the part
  std::size_t block_size = 0;  // k for plain, L for masked
  std::size_t blocks = 0;
  std::size_t pad = 0;
  std::size_t split = 0;       // vertical split factor (== block_size)
  std::size_t masks = 0;       // random masks per matrix (l for masked, else 0)

  std::size_t slots() const { return blocks * block_size; }
  bool is_genuine(std::size_t slot) const { return slot < genuine; }
};

struct BlockPlan {
  Params params;
  PrimeField field{2};
  SchemeCase scheme = SchemeCase::kCase1;
  std::size_t L = 0;  // k - l
  std::size_t p = 0;  // |P|; 0 in Case 1
  // Case 1: one plain part. Case 2: plain part P then masked part P-bar.
  std::vector<PartPlan> parts;
  std::vector<Residue> points;  // x_1..x_N

  const PartPlan& plain() const { return parts.front(); }
  const PartPlan* masked() const { return parts.size() > 1 ? &parts[1] : nullptr; }
  // Total share slots per server across all parts.
  std::size_t total_slots() const;
};

// Validates raw parameters and returns them unchanged. Throws QTooSmall,
// DivisibilityError or RangeError naming the violated rule.
Params validate_params(const Params& raw);

// Case 1 iff alpha * k >= l, compared exactly.
SchemeCase select_case(const Params& params);

BlockPlan build_plan(const Params& params);

// k x |servers| matrix whose column for server i holds x_i^(base + r) for
// r = 0..k-1, with base = (b - 1) * split of the part. `servers` are 1-based
// ids, `block` is 1-based. Throws RangeError for unknown servers or blocks.
FieldMatrix vandermonde_minor(const BlockPlan& plan, std::span<const std::size_t> servers,
                              std::size_t block, Part part);

const PartPlan& part_plan(const BlockPlan& plan, Part part);

// Position of one share slot in the canonical layout: parts in order, blocks
// ascending, matrices ascending within a block.
struct SlotRef {
  Part part = Part::kPlain;
  std::size_t block = 0;     // 0-based within the part
  std::size_t position = 0;  // 0-based within the block
  bool genuine = false;
  std::size_t index = 0;     // index into the batch when genuine
};

std::vector<SlotRef> slot_layout(const BlockPlan& plan);

}  // namespace rsmm
