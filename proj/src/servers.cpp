#include "rsmm/servers.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "rsmm/errors.hpp"
#include "rsmm/rng.hpp"

namespace rsmm {

DelayModel DelayModel::deterministic(std::vector<double> delays) {
  DelayModel m;
  m.kind = Kind::kDeterministic;
  m.delays = std::move(delays);
  return m;
}

DelayModel DelayModel::exponential(double mean, std::uint64_t seed) {
  DelayModel m;
  m.kind = Kind::kExponential;
  m.mean = mean;
  m.seed = seed;
  return m;
}

DelayModel DelayModel::uniform(double low, double high, std::uint64_t seed) {
  DelayModel m;
  m.kind = Kind::kUniform;
  m.low = low;
  m.high = high;
  m.seed = seed;
  return m;
}

const char* to_string(DelayModel::Kind kind) {
  switch (kind) {
    case DelayModel::Kind::kDeterministic: return "deterministic";
    case DelayModel::Kind::kExponential: return "exponential";
    case DelayModel::Kind::kUniform: return "uniform";
  }
  return "?";
}

std::vector<double> DelayModel::sample(std::size_t servers) const {
  std::vector<double> out;
  switch (kind) {
    case Kind::kDeterministic:
      if (delays.size() != servers) {
        throw RangeError("deterministic delay list has " + std::to_string(delays.size()) +
                         " entries for " + std::to_string(servers) + " servers");
      }
      for (double d : delays) {
        if (!(d >= 0.0)) throw RangeError("delays must be nonnegative");
      }
      return delays;
    case Kind::kExponential: {
      if (!(mean > 0.0)) throw RangeError("exponential delay mean must be positive");
      CounterRng rng(seed);
      for (std::size_t i = 0; i < servers; ++i) {
        out.push_back(-mean * std::log1p(-rng.uniform_unit()));
      }
      return out;
    }
    case Kind::kUniform: {
      if (!(low >= 0.0) || !(high >= low)) {
        throw RangeError("uniform delays need 0 <= low <= high");
      }
      CounterRng rng(seed);
      for (std::size_t i = 0; i < servers; ++i) {
        out.push_back(low + (high - low) * rng.uniform_unit());
      }
      return out;
    }
  }
  return out;
}

ServerResponse process(const ServerShares& shares, std::span<const FieldMatrix> public_slots) {
  if (shares.items.size() != public_slots.size()) {
    throw ShapeError("server " + std::to_string(shares.server) + " holds " +
                     std::to_string(shares.items.size()) + " shares but " +
                     std::to_string(public_slots.size()) + " public matrices were given");
  }
  ServerResponse out;
  out.server = shares.server;
  out.items.reserve(shares.items.size());
  for (std::size_t s = 0; s < shares.items.size(); ++s) {
    out.items.push_back(mat_mul(shares.items[s], public_slots[s]));
  }
  return out;
}

RoundResult simulate_round(const SharePackage& shares, const MatrixSeq& b,
                           const DelayModel& delays, std::size_t k) {
  const std::size_t n = shares.servers.size();
  if (k > n || k == 0) {
    throw RangeError("cannot wait for " + std::to_string(k) + " of " + std::to_string(n) +
                     " servers");
  }
  const auto& params = shares.plan.params;
  const auto public_slots = align_to_slots(b, shares.plan, params.D, params.E);
  const auto times = delays.sample(n);

  std::vector<std::future<ServerResponse>> running;
  running.reserve(n);
  for (const auto& server : shares.servers) {
    running.push_back(std::async(std::launch::async, [&server, &public_slots] {
      return process(server, public_slots);
    }));
  }
  std::vector<ServerResponse> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    all.push_back(running[i].get());
    all.back().delay = times[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (times[x] != times[y]) return times[x] < times[y];
    return all[x].server < all[y].server;
  });

  RoundResult result;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t idx = order[pos];
    result.trace.push_back(Arrival{all[idx].server, times[idx]});
    if (pos < k) result.responses.push_back(std::move(all[idx]));
  }
  return result;
}

}  // namespace rsmm
