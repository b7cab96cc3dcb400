#include "rsmm/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rsmm/encoder.hpp"
#include "rsmm/errors.hpp"

namespace rsmm {

namespace {

std::size_t part_offset(const BlockPlan& plan, Part part) {
  return part == Part::kPlain ? 0 : plan.plain().slots();
}

std::size_t slice_entries(const BlockPlan& plan, const PartPlan& part) {
  return plan.params.C / part.split * plan.params.D;
}

MatrixSeq zero_batch(const BlockPlan& plan) {
  MatrixSeq a{Role::kA, {}};
  a.items.assign(plan.params.m, FieldMatrix(plan.field, plan.params.C, plan.params.D));
  return a;
}

// Copies the (0,0) entry of every server's shares in the given block into
// column `col` of `target`.
void read_column(const SharePackage& pkg, const PartPlan& part, std::size_t block0,
                 std::size_t col, FieldMatrix& target) {
  const std::size_t first = part_offset(pkg.plan, part.kind) + block0 * part.block_size;
  for (std::size_t i = 0; i < pkg.servers.size(); ++i) {
    for (std::size_t pos = 0; pos < part.block_size; ++pos) {
      target(i * part.block_size + pos, col) = pkg.servers[i].items[first + pos](0, 0);
    }
  }
}

FieldMatrix select_rows(const FieldMatrix& t, std::span<const std::size_t> servers,
                        std::size_t block_size) {
  FieldMatrix out(t.field(), servers.size() * block_size, t.cols());
  std::size_t r = 0;
  for (std::size_t id : servers) {
    for (std::size_t pos = 0; pos < block_size; ++pos, ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) out(r, c) = t((id - 1) * block_size + pos, c);
    }
  }
  return out;
}

double entropy_base_q(const std::map<std::vector<Residue>, std::size_t>& counts,
                      std::size_t total, double log_q) {
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log(p) / log_q;
  }
  return h;
}

}  // namespace

std::vector<ServerSet> subsets_of_size(std::size_t n, std::size_t size) {
  std::vector<ServerSet> out;
  if (size > n) return out;
  ServerSet current(size);
  for (std::size_t i = 0; i < size; ++i) current[i] = i + 1;
  for (;;) {
    out.push_back(current);
    std::size_t i = size;
    while (i > 0 && current[i - 1] == n - size + i) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < size; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::vector<ServerSet> all_subsets(std::size_t n) {
  std::vector<ServerSet> out;
  for (std::size_t size = 0; size <= n; ++size) {
    auto level = subsets_of_size(n, size);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Rational predicted_g(std::size_t t, const BlockPlan& plan) {
  const auto k = static_cast<std::int64_t>(plan.params.k);
  const auto l = static_cast<std::int64_t>(plan.params.l);
  const auto ti = static_cast<std::int64_t>(t);
  if (t >= plan.params.k) return Rational(1);
  if (plan.scheme == SchemeCase::kCase1) return Rational(ti, k);
  const Rational alpha = plan.params.alpha;
  const Rational g1 = alpha / l * ti;
  Rational g2(0);
  if (ti > l) g2 = (1 - alpha) / (k - l) * (ti - l) + alpha - alpha / l * ti;
  return g1 + g2;
}

Rational predicted_g_finite(std::size_t t, const BlockPlan& plan) {
  const auto m = static_cast<std::int64_t>(plan.params.m);
  const auto k = static_cast<std::int64_t>(plan.params.k);
  const auto ti = static_cast<std::int64_t>(std::min(t, plan.params.k));
  if (plan.scheme == SchemeCase::kCase1) return Rational(ti, k);
  const auto p = static_cast<std::int64_t>(plan.p);
  const auto l = static_cast<std::int64_t>(plan.params.l);
  const auto L = static_cast<std::int64_t>(plan.L);
  const Rational masked = ti <= l ? Rational(0) : Rational(std::min(ti - l, L), L);
  return (Rational(p) * Rational(ti, k) + Rational(m - p) * masked) / m;
}

CoefficientSystem build_coefficients(const BlockPlan& plan) {
  CoefficientSystem system;
  system.plan = plan;
  const std::size_t N = plan.params.N;
  const MatrixSeq zero_a = zero_batch(plan);
  const RandomnessPool zero_pool = zero_randomness(plan);

  for (const auto& part : plan.parts) {
    const std::size_t slice_rows = plan.params.C / part.split;
    for (std::size_t b0 = 0; b0 < part.blocks; ++b0) {
      std::size_t genuine = 0;
      for (std::size_t pos = 0; pos < part.block_size; ++pos) {
        if (part.is_genuine(b0 * part.block_size + pos)) ++genuine;
      }
      BlockCoefficients bc{part.kind, b0 + 1,
                           FieldMatrix(plan.field, N * part.block_size, genuine * part.split),
                           FieldMatrix(plan.field, N * part.block_size, part.block_size * part.masks)};
      std::size_t col = 0;
      for (std::size_t pos = 0; pos < part.block_size; ++pos) {
        const std::size_t slot = b0 * part.block_size + pos;
        if (!part.is_genuine(slot)) continue;
        for (std::size_t j = 0; j < part.split; ++j, ++col) {
          MatrixSeq a = zero_a;
          a.items[part.offset + slot](j * slice_rows, 0) = 1;
          read_column(encode(a, zero_pool, plan), part, b0, col, bc.data);
        }
      }
      for (std::size_t pos = 0; pos < part.block_size; ++pos) {
        const std::size_t slot = b0 * part.block_size + pos;
        for (std::size_t r = 0; r < part.masks; ++r) {
          RandomnessPool pool = zero_pool;
          pool.masks[slot * part.masks + r](0, 0) = 1;
          read_column(encode(zero_a, pool, plan), part, b0, pos * part.masks + r, bc.masks);
        }
      }
      system.blocks.push_back(std::move(bc));
    }
  }
  return system;
}

LeakageMeasure leakage_rank(const CoefficientSystem& system,
                            std::span<const std::size_t> servers) {
  const BlockPlan& plan = system.plan;
  for (std::size_t id : servers) {
    if (id < 1 || id > plan.params.N) throw RangeError("unknown server " + std::to_string(id));
  }
  LeakageMeasure out;
  if (servers.empty()) return out;
  for (const auto& bc : system.blocks) {
    const PartPlan& part = part_plan(plan, bc.part);
    const FieldMatrix data = select_rows(bc.data, servers, part.block_size);
    const FieldMatrix masks = select_rows(bc.masks, servers, part.block_size);
    const std::size_t mask_rank = masks.cols() == 0 ? 0 : mat_rank(masks);
    const FieldMatrix both[] = {data, masks};
    const std::size_t joint_rank = mat_rank(hstack(both));
    const std::size_t gap = joint_rank - mask_rank;
    (bc.part == Part::kPlain ? out.plain_gap : out.masked_gap) += gap;
  }
  const auto CD = static_cast<std::int64_t>(plan.params.C * plan.params.D);
  const auto m = static_cast<std::int64_t>(plan.params.m);
  const auto plain_units = static_cast<std::int64_t>(out.plain_gap * slice_entries(plan, plan.plain()));
  std::int64_t masked_units = 0;
  const std::int64_t plain_count = static_cast<std::int64_t>(plan.plain().genuine);
  if (plain_count > 0) out.plain_fraction = Rational(plain_units, plain_count * CD);
  if (const PartPlan* masked = plan.masked()) {
    masked_units = static_cast<std::int64_t>(out.masked_gap * slice_entries(plan, *masked));
    if (masked->genuine > 0) {
      out.masked_fraction = Rational(masked_units, static_cast<std::int64_t>(masked->genuine) * CD);
    }
  }
  out.fraction = Rational(plain_units + masked_units, m * CD);
  return out;
}

double leakage_exhaustive(const BlockPlan& plan, std::span<const std::size_t> servers) {
  for (std::size_t id : servers) {
    if (id < 1 || id > plan.params.N) throw RangeError("unknown server " + std::to_string(id));
  }
  const std::uint64_t q = plan.params.q;
  const std::size_t a_count = plan.params.m * plan.params.C * plan.params.D;
  const std::size_t r_count = pool_size(plan);
  const std::size_t total = a_count + r_count;
  constexpr double kLimit = 1 << 20;
  if (static_cast<double>(total) * std::log2(static_cast<double>(q)) > std::log2(kLimit) + 1e-9) {
    throw InstanceTooLarge("enumerating q^" + std::to_string(total) + " assignments over F_" +
                           std::to_string(q) + " exceeds 2^20");
  }
  if (servers.empty()) return 0.0;

  std::uint64_t a_space = 1;
  for (std::size_t i = 0; i < a_count; ++i) a_space *= q;
  std::uint64_t r_space = 1;
  for (std::size_t i = 0; i < r_count; ++i) r_space *= q;

  MatrixSeq a = zero_batch(plan);
  RandomnessPool pool = zero_randomness(plan);
  const double log_q = std::log(static_cast<double>(q));

  auto set_digits = [q](std::uint64_t index, auto&& assign, std::size_t count) {
    for (std::size_t d = 0; d < count; ++d) {
      assign(d, index % q);
      index /= q;
    }
  };

  std::map<std::vector<Residue>, std::size_t> marginal;
  double conditional = 0.0;  // H(shares_I | A)
  for (std::uint64_t ai = 0; ai < a_space; ++ai) {
    set_digits(ai, [&](std::size_t d, Residue v) {
      const std::size_t per = plan.params.C * plan.params.D;
      auto& item = a.items[d / per];
      item(d % per / plan.params.D, d % plan.params.D) = v;
    }, a_count);
    std::map<std::vector<Residue>, std::size_t> given_a;
    for (std::uint64_t ri = 0; ri < r_space; ++ri) {
      set_digits(ri, [&](std::size_t d, Residue v) {
        std::size_t idx = d;
        for (auto& mask : pool.masks) {
          if (idx < mask.size()) {
            mask(idx / mask.cols(), idx % mask.cols()) = v;
            break;
          }
          idx -= mask.size();
        }
      }, r_count);
      const SharePackage pkg = encode(a, pool, plan);
      std::vector<Residue> observed;
      for (std::size_t id : servers) {
        for (const auto& share : pkg.servers[id - 1].items) {
          observed.insert(observed.end(), share.entries().begin(), share.entries().end());
        }
      }
      ++marginal[observed];
      ++given_a[std::move(observed)];
    }
    conditional += entropy_base_q(given_a, r_space, log_q);
  }
  conditional /= static_cast<double>(a_space);
  const double h_shares = entropy_base_q(marginal, a_space * r_space, log_q);
  // H(A) = a_count in base q; A is uniform over all residues.
  return (h_shares - conditional) / static_cast<double>(a_count);
}

bool check_G_invertible(const BlockPlan& plan, std::span<const std::size_t> servers,
                        std::size_t block) {
  if (plan.scheme != SchemeCase::kCase2) throw RangeError("G is only defined for case 2 plans");
  if (servers.size() != plan.params.l) {
    throw RangeError("G needs exactly l=" + std::to_string(plan.params.l) + " servers, got " +
                     std::to_string(servers.size()));
  }
  const std::size_t k = plan.params.k;
  FieldMatrix selector(plan.field, plan.L, k);  // Trans(V) = [I_L | 0]
  for (std::size_t i = 0; i < plan.L; ++i) selector(i, i) = 1;
  const FieldMatrix stacked[] = {
      selector, vandermonde_minor(plan, servers, block, Part::kMasked).transpose()};
  return mat_rank(vstack(stacked)) == k;
}

LeakageProfile audit_profile(const BlockPlan& plan, std::span<const ServerSet> subsets) {
  const CoefficientSystem system = build_coefficients(plan);
  LeakageProfile profile;
  const std::size_t N = plan.params.N;
  profile.rows.resize(N + 1);
  for (std::size_t t = 0; t <= N; ++t) {
    profile.rows[t].t = t;
    profile.rows[t].predicted = predicted_g(t, plan);
    profile.rows[t].predicted_finite = predicted_g_finite(t, plan);
  }
  for (const auto& subset : subsets) {
    SubsetLeakage entry{subset, leakage_rank(system, subset)};
    ProfileRow& row = profile.rows.at(subset.size());
    const Rational& value = entry.measure.fraction;
    if (!row.measured) {
      row.measured = value;
    } else if (*row.measured != value) {
      row.symmetric = false;
      profile.symmetric = false;
    }
    ++row.subsets_checked;
    if (value != row.predicted_finite) profile.matches_finite = false;
    if (subset.size() <= plan.params.l && value > plan.params.alpha) profile.privacy_holds = false;
    profile.subsets.push_back(std::move(entry));
  }
  return profile;
}

}  // namespace rsmm
