#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsmm/encoder.hpp"
#include "rsmm/plan.hpp"
#include "rsmm/servers.hpp"

namespace rsmm {

struct BlockDecode {
  // A_s B_s for every slot of the block (padded slots included), C x E.
  std::vector<FieldMatrix> products;
  // Masked part only: the discarded R_(s,r) B_s per slot, l entries each.
  std::vector<std::vector<FieldMatrix>> mask_products;
};

// Solves one block from exactly k responses. `block` is 1-based.
// Throws NotEnoughResponses unless exactly k distinct servers are given.
BlockDecode decode_block(std::span<const ServerResponse> responses, const BlockPlan& plan,
                         Part part, std::size_t block);

// Reconstructs the m products. Given more than k responses, the k lowest
// server ids are used.
MatrixSeq decode(std::span<const ServerResponse> responses, const BlockPlan& plan);

}  // namespace rsmm
