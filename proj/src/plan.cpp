#include "rsmm/plan.hpp"

#include <numeric>
#include <set>
#include <string>

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

PartPlan make_part(Part kind, std::size_t offset, std::size_t genuine,
                   std::size_t block_size, std::size_t masks) {
  PartPlan part;
  part.kind = kind;
  part.offset = offset;
  part.genuine = genuine;
  part.block_size = block_size;
  part.split = block_size;
  part.blocks = ceil_div(genuine, block_size);
  part.pad = part.blocks * block_size - genuine;
  part.masks = masks;
  return part;
}

}  // namespace

const char* to_string(SchemeCase c) { return c == SchemeCase::kCase1 ? "case1" : "case2"; }
const char* to_string(Part p) { return p == Part::kPlain ? "plain" : "masked"; }

std::size_t BlockPlan::total_slots() const {
  std::size_t total = 0;
  for (const auto& part : parts) total += part.slots();
  return total;
}

SchemeCase select_case(const Params& params) {
  // alpha * k >= l, cross-multiplied: num * k >= l * den.
  const auto lhs = static_cast<int128_t>(params.alpha.numerator()) * params.k;
  const auto rhs = static_cast<int128_t>(params.l) * params.alpha.denominator();
  return lhs >= rhs ? SchemeCase::kCase1 : SchemeCase::kCase2;
}

Params validate_params(const Params& raw) {
  if (raw.N < 2) throw RangeError("N must be at least 2");
  if (raw.k < 1 || raw.k > raw.N) throw RangeError("k must satisfy 1 <= k <= N");
  if (raw.l >= raw.k) throw RangeError("collusion bound l must be below k");
  if (raw.alpha < 0 || raw.alpha >= 1) throw RangeError("alpha must lie in [0, 1)");
  if (raw.C < 1 || raw.D < 1 || raw.E < 1 || raw.m < 1) {
    throw RangeError("C, D, E and m must all be at least 1");
  }
  const PrimeField field(raw.q);
  if (raw.q <= raw.N) {
    throw QTooSmall("q=" + std::to_string(raw.q) + " leaves fewer than N=" +
                    std::to_string(raw.N) + " distinct nonzero evaluation points");
  }
  if (!raw.points.empty()) {
    if (raw.points.size() != raw.N) {
      throw RangeError("expected " + std::to_string(raw.N) + " evaluation points");
    }
    std::set<Residue> seen;
    for (auto x : raw.points) {
      if (x == 0 || x >= raw.q) throw RangeError("evaluation points must be nonzero residues");
      if (!seen.insert(x).second) throw RangeError("evaluation points must be distinct");
    }
  }
  if (select_case(raw) == SchemeCase::kCase1) {
    if (raw.C % raw.k != 0) {
      throw DivisibilityError("case 1 needs k=" + std::to_string(raw.k) +
                              " to divide C=" + std::to_string(raw.C));
    }
  } else {
    const std::size_t split = std::lcm(raw.k, raw.k - raw.l);
    if (raw.C % split != 0) {
      throw DivisibilityError("case 2 needs lcm(k, k-l)=" + std::to_string(split) +
                              " to divide C=" + std::to_string(raw.C));
    }
  }
  return raw;
}

BlockPlan build_plan(const Params& params) {
  BlockPlan plan;
  plan.params = validate_params(params);
  plan.field = PrimeField(params.q);
  plan.scheme = select_case(params);
  plan.L = params.k - params.l;
  if (params.points.empty()) {
    for (std::size_t i = 1; i <= params.N; ++i) plan.points.push_back(i);
  } else {
    plan.points = params.points;
  }

  if (plan.scheme == SchemeCase::kCase1) {
    plan.p = 0;
    plan.parts.push_back(make_part(Part::kPlain, 0, params.m, params.k, 0));
    return plan;
  }
  // |P| = floor(alpha * k * m / l). Rounding down keeps the leakage of any
  // l servers at or below alpha for every m.
  const auto num = static_cast<int128_t>(params.alpha.numerator()) * params.k * params.m;
  const auto den = static_cast<int128_t>(params.alpha.denominator()) * params.l;
  plan.p = static_cast<std::size_t>(num / den);
  plan.parts.push_back(make_part(Part::kPlain, 0, plan.p, params.k, 0));
  plan.parts.push_back(make_part(Part::kMasked, plan.p, params.m - plan.p, plan.L, params.l));
  return plan;
}

const PartPlan& part_plan(const BlockPlan& plan, Part part) {
  if (part == Part::kPlain) return plan.plain();
  if (const auto* masked = plan.masked()) return *masked;
  throw RangeError("plan has no masked part in case 1");
}

std::vector<SlotRef> slot_layout(const BlockPlan& plan) {
  std::vector<SlotRef> out;
  out.reserve(plan.total_slots());
  for (const auto& part : plan.parts) {
    for (std::size_t slot = 0; slot < part.slots(); ++slot) {
      out.push_back(SlotRef{part.kind, slot / part.block_size, slot % part.block_size,
                            part.is_genuine(slot), part.offset + slot});
    }
  }
  return out;
}

FieldMatrix vandermonde_minor(const BlockPlan& plan, std::span<const std::size_t> servers,
                              std::size_t block, Part part) {
  const PartPlan& pp = part_plan(plan, part);
  if (block < 1 || block > pp.blocks) {
    throw RangeError("block " + std::to_string(block) + " outside [1, " +
                     std::to_string(pp.blocks) + "]");
  }
  const std::size_t k = plan.params.k;
  const std::size_t base = (block - 1) * pp.split;
  FieldMatrix out(plan.field, k, servers.size());
  for (std::size_t c = 0; c < servers.size(); ++c) {
    const std::size_t id = servers[c];
    if (id < 1 || id > plan.params.N) {
      throw RangeError("unknown server " + std::to_string(id));
    }
    const Residue x = plan.points[id - 1];
    Residue power = plan.field.pow(x, base);
    for (std::size_t r = 0; r < k; ++r) {
      out(r, c) = power;
      power = plan.field.mul(power, x);
    }
  }
  return out;
}

}  // namespace rsmm
