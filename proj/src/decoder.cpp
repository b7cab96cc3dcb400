#include "rsmm/decoder.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

std::size_t part_offset(const BlockPlan& plan, Part part) {
  return part == Part::kPlain ? 0 : plan.plain().slots();
}

void check_responses(std::span<const ServerResponse> responses, const BlockPlan& plan) {
  std::set<std::size_t> ids;
  for (const auto& r : responses) {
    if (r.server < 1 || r.server > plan.params.N) {
      throw RangeError("response from unknown server " + std::to_string(r.server));
    }
    if (!ids.insert(r.server).second) {
      throw NotEnoughResponses("duplicate response from server " + std::to_string(r.server));
    }
    if (r.items.size() != plan.total_slots()) {
      throw ShapeError("server " + std::to_string(r.server) + " returned " +
                       std::to_string(r.items.size()) + " items, expected " +
                       std::to_string(plan.total_slots()));
    }
  }
}

}  // namespace

BlockDecode decode_block(std::span<const ServerResponse> responses, const BlockPlan& plan,
                         Part part, std::size_t block) {
  const std::size_t k = plan.params.k;
  if (responses.size() != k) {
    throw NotEnoughResponses("block decoding needs exactly k=" + std::to_string(k) +
                             " responses, got " + std::to_string(responses.size()));
  }
  check_responses(responses, plan);
  const PartPlan& pp = part_plan(plan, part);

  std::vector<std::size_t> servers;
  for (const auto& r : responses) servers.push_back(r.server);
  const FieldMatrix minor = vandermonde_minor(plan, servers, block, part);
  FieldMatrix inverse = [&] {
    try {
      return mat_inverse(minor.transpose());
    } catch (const SingularMatrix& e) {
      throw SingularMatrix(std::string("internal invariant violated: Vandermonde minor singular: ") +
                           e.what());
    }
  }();

  const PrimeField& f = plan.field;
  const std::size_t rows = plan.params.C / pp.split;
  const std::size_t data_slices = pp.split;
  const std::size_t first_slot = part_offset(plan, part) + (block - 1) * pp.block_size;

  BlockDecode out;
  for (std::size_t pos = 0; pos < pp.block_size; ++pos) {
    const std::size_t slot = first_slot + pos;
    std::vector<FieldMatrix> solved;
    solved.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      FieldMatrix x(f, rows, plan.params.E);
      for (std::size_t i = 0; i < k; ++i) {
        const auto& z = responses[i].items[slot];
        if (z.rows() != rows || z.cols() != plan.params.E) {
          throw ShapeError("response item has the wrong shape");
        }
        mat_axpy(x, inverse(j, i), z);
      }
      solved.push_back(std::move(x));
    }
    out.products.push_back(vstack(std::span<const FieldMatrix>(solved).first(data_slices)));
    if (part == Part::kMasked) {
      out.mask_products.emplace_back(solved.begin() + static_cast<std::ptrdiff_t>(data_slices),
                                     solved.end());
    }
  }
  return out;
}

MatrixSeq decode(std::span<const ServerResponse> responses, const BlockPlan& plan) {
  const std::size_t k = plan.params.k;
  check_responses(responses, plan);
  if (responses.size() < k) {
    throw NotEnoughResponses("decoding needs k=" + std::to_string(k) + " responses, got " +
                             std::to_string(responses.size()));
  }
  std::vector<ServerResponse> chosen(responses.begin(), responses.end());
  std::sort(chosen.begin(), chosen.end(),
            [](const ServerResponse& a, const ServerResponse& b) { return a.server < b.server; });
  chosen.resize(k);

  MatrixSeq out{Role::kAB, {}};
  out.items.reserve(plan.params.m);
  for (const auto& part : plan.parts) {
    for (std::size_t b = 1; b <= part.blocks; ++b) {
      BlockDecode block = decode_block(chosen, plan, part.kind, b);
      for (std::size_t pos = 0; pos < part.block_size; ++pos) {
        if (part.is_genuine((b - 1) * part.block_size + pos)) {
          out.items.push_back(std::move(block.products[pos]));
        }
      }
    }
  }
  return out;
}

}  // namespace rsmm
