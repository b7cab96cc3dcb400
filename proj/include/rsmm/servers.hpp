#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rsmm/encoder.hpp"
#include "rsmm/matrix.hpp"

namespace rsmm {

struct ServerResponse {
  std::size_t server = 0;  // 1-based
  std::vector<FieldMatrix> items;  // one Z_i^s per share slot
  double delay = 0.0;
};

// Produces one nonnegative logical delay per server for a round.
struct DelayModel {
  enum class Kind { kDeterministic, kExponential, kUniform };

  Kind kind = Kind::kDeterministic;
  std::vector<double> delays;  // kDeterministic
  double mean = 1.0;           // kExponential
  double low = 0.0;            // kUniform
  double high = 1.0;           // kUniform
  std::uint64_t seed = 0;

  static DelayModel deterministic(std::vector<double> delays);
  static DelayModel exponential(double mean, std::uint64_t seed);
  static DelayModel uniform(double low, double high, std::uint64_t seed);

  std::vector<double> sample(std::size_t servers) const;
};

const char* to_string(DelayModel::Kind kind);

// h_i: multiplies each share by the public matrix of its slot. `public_slots`
// must be the slot-aligned B (see align_to_slots).
ServerResponse process(const ServerShares& shares, std::span<const FieldMatrix> public_slots);

struct Arrival {
  std::size_t server = 0;
  double time = 0.0;
};

struct RoundResult {
  std::vector<ServerResponse> responses;  // the k fastest, in arrival order
  std::vector<Arrival> trace;             // all N servers, in arrival order
};

// Every server computes; the k with the smallest delay (ties by id) are kept.
RoundResult simulate_round(const SharePackage& shares, const MatrixSeq& b,
                           const DelayModel& delays, std::size_t k);

}  // namespace rsmm
