#pragma once

// Share and response dumps.
//
// Binary layout, all integers little-endian:
//   "RSMM" | u32 version (1) | u32 role (0 shares, 1 responses)
//   u64 q, N, k, l, alpha_num, alpha_den, C, D, E, m, seed
//   u64 server_count
//   per server: u64 server id | u64 residue count | u64 residues...
// Residues follow the canonical slot order, each matrix row-major.
//
// The JSON variant carries the same fields, with residues as decimal strings.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "rsmm/encoder.hpp"
#include "rsmm/plan.hpp"
#include "rsmm/servers.hpp"

namespace rsmm::wire {

inline constexpr std::uint32_t kVersion = 1;

enum class DumpRole : std::uint32_t { kShares = 0, kResponses = 1 };

struct ServerEntry {
  std::size_t server = 0;
  std::vector<Residue> residues;
};

struct Dump {
  DumpRole role = DumpRole::kShares;
  Params params;
  std::uint64_t seed = 0;
  std::vector<ServerEntry> servers;
};

Dump make_dump(const SharePackage& shares, std::uint64_t seed);
Dump make_dump(const BlockPlan& plan, std::span<const ServerResponse> responses,
               std::uint64_t seed);

std::vector<std::uint8_t> to_binary(const Dump& dump);
// Throws FormatError on bad magic, version, role or truncated input.
Dump from_binary(std::span<const std::uint8_t> bytes);

nlohmann::ordered_json to_json(const Dump& dump);
Dump from_json(const nlohmann::json& doc);

// Rebuilds matrices from a dump; the plan is derived from the header.
SharePackage to_shares(const Dump& dump);
std::vector<ServerResponse> to_responses(const Dump& dump);

}  // namespace rsmm::wire
