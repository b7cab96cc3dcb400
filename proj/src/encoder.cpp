#include "rsmm/encoder.hpp"

#include <string>

#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

// Adds sum_j x^(base + j) * slices[j] into `share`.
void accumulate(FieldMatrix& share, const PrimeField& f, Residue x, std::size_t base,
                const std::vector<FieldMatrix>& slices) {
  Residue power = f.pow(x, base);
  for (const auto& slice : slices) {
    mat_axpy(share, power, slice);
    power = f.mul(power, x);
  }
}

SharePackage empty_package(const BlockPlan& plan) {
  SharePackage pkg;
  pkg.plan = plan;
  for (std::size_t i = 1; i <= plan.params.N; ++i) {
    ServerShares s;
    s.server = i;
    s.items.reserve(plan.total_slots());
    pkg.servers.push_back(std::move(s));
  }
  return pkg;
}

// Appends the shares of one part to every server. `pool` may be null for
// plain parts.
void encode_part(SharePackage& pkg, const MatrixSeq& a, const PartPlan& part,
                 const RandomnessPool* pool) {
  const BlockPlan& plan = pkg.plan;
  const PrimeField& f = plan.field;
  const std::size_t rows = plan.params.C / part.split;
  const std::size_t D = plan.params.D;
  const FieldMatrix zero_slice(f, rows, D);
  const std::vector<FieldMatrix> zero_slices(part.split, zero_slice);

  for (std::size_t slot = 0; slot < part.slots(); ++slot) {
    const std::size_t b0 = slot / part.block_size;
    const auto slices = part.is_genuine(slot)
                            ? split_vertical(a.items[part.offset + slot], part.split)
                            : zero_slices;
    std::vector<FieldMatrix> masks;
    if (part.masks > 0) {
      const auto first = pool->masks.begin() + static_cast<std::ptrdiff_t>(slot * part.masks);
      masks.assign(first, first + static_cast<std::ptrdiff_t>(part.masks));
    }
    for (auto& server : pkg.servers) {
      const Residue x = plan.points[server.server - 1];
      FieldMatrix share(f, rows, D);
      accumulate(share, f, x, b0 * part.split, slices);
      accumulate(share, f, x, (b0 + 1) * part.split, masks);
      server.items.push_back(std::move(share));
    }
  }
}

}  // namespace

const char* to_string(Role role) {
  switch (role) {
    case Role::kA: return "A";
    case Role::kB: return "B";
    case Role::kAB: return "AB";
  }
  return "?";
}

void check_seq(const MatrixSeq& seq, std::size_t count, std::size_t rows, std::size_t cols) {
  if (seq.items.size() != count) {
    throw ShapeError(std::string("batch ") + to_string(seq.role) + " has " +
                     std::to_string(seq.items.size()) + " items, expected " +
                     std::to_string(count));
  }
  for (const auto& item : seq.items) {
    if (item.rows() != rows || item.cols() != cols) {
      throw ShapeError(std::string("batch ") + to_string(seq.role) + " item is " +
                       std::to_string(item.rows()) + "x" + std::to_string(item.cols()) +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
}

MatrixSeq random_seq(Role role, const PrimeField& field, std::size_t count,
                     std::size_t rows, std::size_t cols, CounterRng& rng) {
  MatrixSeq seq{role, {}};
  seq.items.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<Residue> entries(rows * cols);
    for (auto& e : entries) e = rng.uniform_residue(field.modulus());
    seq.items.emplace_back(field, rows, cols, std::move(entries));
  }
  return seq;
}

std::size_t RandomnessPool::residues() const {
  std::size_t total = 0;
  for (const auto& m : masks) total += m.size();
  return total;
}

std::vector<FieldMatrix> split_vertical(const FieldMatrix& m, std::size_t parts) {
  if (parts == 0 || m.rows() % parts != 0) {
    throw DivisibilityError("cannot split " + std::to_string(m.rows()) + " rows into " +
                            std::to_string(parts) + " equal parts");
  }
  const std::size_t rows = m.rows() / parts;
  std::vector<FieldMatrix> out;
  out.reserve(parts);
  for (std::size_t j = 0; j < parts; ++j) out.push_back(row_block(m, j * rows, rows));
  return out;
}

std::size_t pool_size(const BlockPlan& plan) {
  const PartPlan* masked = plan.masked();
  if (masked == nullptr) return 0;
  return masked->slots() * masked->masks * (plan.params.C / masked->split) * plan.params.D;
}

RandomnessPool draw_randomness(const BlockPlan& plan, std::uint64_t seed) {
  RandomnessPool pool;
  pool.seed = seed;
  if (plan.scheme != SchemeCase::kCase2) return pool;
  const PartPlan& masked = *plan.masked();
  const std::size_t rows = plan.params.C / masked.split;
  CounterRng rng(seed);
  MatrixSeq drawn = random_seq(Role::kA, plan.field, masked.slots() * masked.masks, rows,
                               plan.params.D, rng);
  pool.masks = std::move(drawn.items);
  return pool;
}

RandomnessPool zero_randomness(const BlockPlan& plan) {
  RandomnessPool pool;
  if (const PartPlan* masked = plan.masked()) {
    const FieldMatrix zero(plan.field, plan.params.C / masked->split, plan.params.D);
    pool.masks.assign(masked->slots() * masked->masks, zero);
  }
  return pool;
}

SharePackage encode_case1(const MatrixSeq& a, const BlockPlan& plan) {
  if (plan.scheme != SchemeCase::kCase1) throw RangeError("encode_case1 needs a case 1 plan");
  if (plan.params.C % plan.params.k != 0) {
    throw DivisibilityError("k must divide C for case 1");
  }
  check_seq(a, plan.params.m, plan.params.C, plan.params.D);
  SharePackage pkg = empty_package(plan);
  encode_part(pkg, a, plan.plain(), nullptr);
  return pkg;
}

SharePackage encode_case2(const MatrixSeq& a, const RandomnessPool& pool, const BlockPlan& plan) {
  if (plan.scheme != SchemeCase::kCase2) throw RangeError("encode_case2 needs a case 2 plan");
  const PartPlan& masked = *plan.masked();
  if (plan.params.C % plan.params.k != 0 || plan.params.C % masked.split != 0) {
    throw DivisibilityError("lcm(k, k-l) must divide C for case 2");
  }
  check_seq(a, plan.params.m, plan.params.C, plan.params.D);
  const std::size_t needed = masked.slots() * masked.masks;
  if (pool.masks.size() < needed) {
    throw RandomnessUnderflow("pool holds " + std::to_string(pool.masks.size()) +
                              " masks, encoding needs " + std::to_string(needed));
  }
  if (pool.masks.size() > needed) {
    throw ShapeError("pool holds " + std::to_string(pool.masks.size()) +
                     " masks, encoding consumes exactly " + std::to_string(needed));
  }
  for (const auto& mask : pool.masks) {
    if (mask.rows() != plan.params.C / masked.split || mask.cols() != plan.params.D) {
      throw ShapeError("mask shape does not match (C/L) x D");
    }
  }
  SharePackage pkg = empty_package(plan);
  encode_part(pkg, a, plan.plain(), nullptr);
  encode_part(pkg, a, masked, &pool);
  pkg.randomness_consumed = pool.residues();
  return pkg;
}

SharePackage encode(const MatrixSeq& a, const RandomnessPool& pool, const BlockPlan& plan) {
  return plan.scheme == SchemeCase::kCase1 ? encode_case1(a, plan) : encode_case2(a, pool, plan);
}

std::vector<FieldMatrix> align_to_slots(const MatrixSeq& seq, const BlockPlan& plan,
                                        std::size_t rows, std::size_t cols) {
  check_seq(seq, plan.params.m, rows, cols);
  std::vector<FieldMatrix> out;
  out.reserve(plan.total_slots());
  const FieldMatrix zero(plan.field, rows, cols);
  for (const auto& slot : slot_layout(plan)) {
    out.push_back(slot.genuine ? seq.items[slot.index] : zero);
  }
  return out;
}

}  // namespace rsmm
