#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rsmm/matrix.hpp"
#include "rsmm/plan.hpp"
#include "rsmm/rational.hpp"

namespace rsmm {

using ServerSet = std::vector<std::size_t>;  // sorted 1-based ids

// Every subset of [n], ordered by size then lexicographically.
std::vector<ServerSet> all_subsets(std::size_t n);
// Every subset of [n] with exactly `size` elements, lexicographic.
std::vector<ServerSet> subsets_of_size(std::size_t n, std::size_t size);

// Leakage profile claimed for the scheme as m grows: t/k in case 1,
// g1 + g2 in case 2.
Rational predicted_g(std::size_t t, const BlockPlan& plan);
// Same profile at the plan's actual |P|; equals predicted_g whenever
// alpha*k*m/l is an integer.
Rational predicted_g_finite(std::size_t t, const BlockPlan& plan);

// Scalar coefficients of one block: rows (server, slot) for every server,
// columns genuine A-slices (slot, j) followed by masks (slot, r).
struct BlockCoefficients {
  Part part = Part::kPlain;
  std::size_t block = 0;  // 1-based
  FieldMatrix data;       // N*block_size x (#genuine slices)
  FieldMatrix masks;      // N*block_size x (#masks)
};

struct CoefficientSystem {
  BlockPlan plan;
  std::vector<BlockCoefficients> blocks;
};

// Reads the coefficients off the encoder by encoding unit inputs one slice
// at a time, so the audit measures the encoder as built.
CoefficientSystem build_coefficients(const BlockPlan& plan);

struct LeakageMeasure {
  Rational fraction{0};         // I(A; shares_I) / H(A)
  Rational plain_fraction{0};   // I(A^P; shares_I) / H(A^P), 0 if P empty
  Rational masked_fraction{0};  // I(A^Pbar; shares_I) / H(A^Pbar), 0 in case 1
  std::size_t plain_gap = 0;    // rank gaps summed over blocks, in slices
  std::size_t masked_gap = 0;
};

// Exact leakage of a server subset via rank gaps:
// I = (rank[T_A | T_R] - rank[T_R]) * slice_entries * log q per block.
LeakageMeasure leakage_rank(const CoefficientSystem& system, std::span<const std::size_t> servers);

// Brute-force mutual information by enumerating every (A, R). Requires
// q^(#A residues + #R residues) <= 2^20, else throws InstanceTooLarge.
double leakage_exhaustive(const BlockPlan& plan, std::span<const std::size_t> servers);

// Builds G = [Trans(V); Trans(M_I)] for |I| = l and checks it has rank k.
bool check_G_invertible(const BlockPlan& plan, std::span<const std::size_t> servers,
                        std::size_t block);

struct SubsetLeakage {
  ServerSet servers;
  LeakageMeasure measure;
};

struct ProfileRow {
  std::size_t t = 0;
  Rational predicted{0};
  Rational predicted_finite{0};
  std::optional<Rational> measured;  // empty when no subset of size t checked
  std::size_t subsets_checked = 0;
  bool symmetric = true;
};

struct LeakageProfile {
  std::vector<ProfileRow> rows;  // t = 0..N
  std::vector<SubsetLeakage> subsets;
  bool symmetric = true;
  bool matches_finite = true;   // every measurement == predicted_g_finite
  bool privacy_holds = true;    // measured <= alpha for |I| <= l
};

LeakageProfile audit_profile(const BlockPlan& plan, std::span<const ServerSet> subsets);

}  // namespace rsmm
