#include "rsmm/wire.hpp"

#include <cstring>

#include "rsmm/errors.hpp"

namespace rsmm::wire {

namespace {

constexpr char kMagic[4] = {'R', 'S', 'M', 'M'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t get(std::size_t width) {
    if (pos_ + width > bytes_.size()) throw FormatError("dump truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_default_points(const BlockPlan& plan) {
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    if (plan.points[i] != i + 1) {
      throw FormatError("dumps only describe plans with default evaluation points");
    }
  }
}

std::vector<Residue> flatten(const std::vector<FieldMatrix>& items) {
  std::vector<Residue> out;
  for (const auto& m : items) out.insert(out.end(), m.entries().begin(), m.entries().end());
  return out;
}

// Reshapes a flat residue list into per-slot matrices with `cols` columns.
std::vector<FieldMatrix> unflatten(const BlockPlan& plan, const std::vector<Residue>& flat,
                                   std::size_t cols) {
  std::vector<FieldMatrix> items;
  std::size_t pos = 0;
  for (const auto& slot : slot_layout(plan)) {
    const std::size_t rows = plan.params.C / part_plan(plan, slot.part).split;
    if (pos + rows * cols > flat.size()) throw FormatError("server entry too short");
    std::vector<Residue> entries(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                                 flat.begin() + static_cast<std::ptrdiff_t>(pos + rows * cols));
    for (auto r : entries) {
      if (r >= plan.params.q) throw FormatError("residue out of range");
    }
    items.emplace_back(plan.field, rows, cols, std::move(entries));
    pos += rows * cols;
  }
  if (pos != flat.size()) throw FormatError("server entry too long");
  return items;
}

std::uint64_t field_u64(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    throw FormatError(std::string("dump field '") + key + "' missing or not an unsigned integer");
  }
  return doc[key].get<std::uint64_t>();
}

}  // namespace

Dump make_dump(const SharePackage& shares, std::uint64_t seed) {
  check_default_points(shares.plan);
  Dump dump{DumpRole::kShares, shares.plan.params, seed, {}};
  for (const auto& s : shares.servers) dump.servers.push_back({s.server, flatten(s.items)});
  return dump;
}

Dump make_dump(const BlockPlan& plan, std::span<const ServerResponse> responses,
               std::uint64_t seed) {
  check_default_points(plan);
  Dump dump{DumpRole::kResponses, plan.params, seed, {}};
  for (const auto& r : responses) dump.servers.push_back({r.server, flatten(r.items)});
  return dump;
}

std::vector<std::uint8_t> to_binary(const Dump& dump) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(dump.role));
  const Params& p = dump.params;
  for (std::uint64_t v : {p.q, std::uint64_t{p.N}, std::uint64_t{p.k}, std::uint64_t{p.l},
                          static_cast<std::uint64_t>(p.alpha.numerator()),
                          static_cast<std::uint64_t>(p.alpha.denominator()), std::uint64_t{p.C},
                          std::uint64_t{p.D}, std::uint64_t{p.E}, std::uint64_t{p.m}, dump.seed}) {
    put_u64(out, v);
  }
  put_u64(out, dump.servers.size());
  for (const auto& s : dump.servers) {
    put_u64(out, s.server);
    put_u64(out, s.residues.size());
    for (auto r : s.residues) put_u64(out, r);
  }
  return out;
}

Dump from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("missing RSMM magic");
  }
  Reader in(bytes.subspan(4));
  if (in.u32() != kVersion) throw FormatError("unsupported dump version");
  const std::uint32_t role = in.u32();
  if (role > 1) throw FormatError("unknown dump role " + std::to_string(role));
  Dump dump;
  dump.role = static_cast<DumpRole>(role);
  Params& p = dump.params;
  p.q = in.u64();
  p.N = in.u64();
  p.k = in.u64();
  p.l = in.u64();
  const auto num = static_cast<std::int64_t>(in.u64());
  const auto den = static_cast<std::int64_t>(in.u64());
  if (den <= 0 || num < 0) throw FormatError("bad alpha in dump header");
  p.alpha = Rational(num, den);
  p.C = in.u64();
  p.D = in.u64();
  p.E = in.u64();
  p.m = in.u64();
  dump.seed = in.u64();
  const std::uint64_t count = in.u64();
  for (std::uint64_t s = 0; s < count; ++s) {
    ServerEntry entry;
    entry.server = in.u64();
    const std::uint64_t residues = in.u64();
    if (residues > in.remaining() / 8) throw FormatError("dump truncated");
    entry.residues.reserve(residues);
    for (std::uint64_t r = 0; r < residues; ++r) entry.residues.push_back(in.u64());
    dump.servers.push_back(std::move(entry));
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes after dump");
  return dump;
}

nlohmann::ordered_json to_json(const Dump& dump) {
  const Params& p = dump.params;
  nlohmann::ordered_json doc;
  doc["magic"] = "RSMM";
  doc["version"] = kVersion;
  doc["role"] = dump.role == DumpRole::kShares ? "shares" : "response";
  doc["q"] = p.q;
  doc["N"] = p.N;
  doc["k"] = p.k;
  doc["l"] = p.l;
  doc["alpha_num"] = static_cast<std::uint64_t>(p.alpha.numerator());
  doc["alpha_den"] = static_cast<std::uint64_t>(p.alpha.denominator());
  doc["C"] = p.C;
  doc["D"] = p.D;
  doc["E"] = p.E;
  doc["m"] = p.m;
  doc["seed"] = dump.seed;
  auto& servers = doc["servers"] = nlohmann::ordered_json::array();
  for (const auto& s : dump.servers) {
    nlohmann::ordered_json entry;
    entry["server"] = s.server;
    auto& residues = entry["residues"] = nlohmann::ordered_json::array();
    for (auto r : s.residues) residues.push_back(std::to_string(r));
    servers.push_back(std::move(entry));
  }
  return doc;
}

Dump from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("magic", "") != "RSMM") throw FormatError("missing RSMM magic");
  if (field_u64(doc, "version") != kVersion) throw FormatError("unsupported dump version");
  Dump dump;
  const std::string role = doc.value("role", "");
  if (role == "shares") {
    dump.role = DumpRole::kShares;
  } else if (role == "response") {
    dump.role = DumpRole::kResponses;
  } else {
    throw FormatError("unknown dump role '" + role + "'");
  }
  Params& p = dump.params;
  p.q = field_u64(doc, "q");
  p.N = field_u64(doc, "N");
  p.k = field_u64(doc, "k");
  p.l = field_u64(doc, "l");
  const auto den = static_cast<std::int64_t>(field_u64(doc, "alpha_den"));
  if (den == 0) throw FormatError("bad alpha in dump header");
  p.alpha = Rational(static_cast<std::int64_t>(field_u64(doc, "alpha_num")), den);
  p.C = field_u64(doc, "C");
  p.D = field_u64(doc, "D");
  p.E = field_u64(doc, "E");
  p.m = field_u64(doc, "m");
  dump.seed = field_u64(doc, "seed");
  if (!doc.contains("servers") || !doc["servers"].is_array()) throw FormatError("missing servers");
  for (const auto& s : doc["servers"]) {
    ServerEntry entry;
    entry.server = field_u64(s, "server");
    if (!s.contains("residues") || !s["residues"].is_array()) throw FormatError("missing residues");
    for (const auto& r : s["residues"]) {
      if (!r.is_string()) throw FormatError("residues must be decimal strings");
      const std::string text = r.get<std::string>();
      std::size_t used = 0;
      std::uint64_t value = 0;
      try {
        value = std::stoull(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (text.empty() || used != text.size() || text[0] == '-') {
        throw FormatError("malformed residue '" + text + "'");
      }
      entry.residues.push_back(value);
    }
    dump.servers.push_back(std::move(entry));
  }
  return dump;
}

SharePackage to_shares(const Dump& dump) {
  if (dump.role != DumpRole::kShares) throw FormatError("dump does not hold shares");
  SharePackage pkg;
  pkg.plan = build_plan(dump.params);
  for (const auto& s : dump.servers) {
    pkg.servers.push_back({s.server, unflatten(pkg.plan, s.residues, dump.params.D)});
  }
  pkg.randomness_consumed = pool_size(pkg.plan);
  return pkg;
}

std::vector<ServerResponse> to_responses(const Dump& dump) {
  if (dump.role != DumpRole::kResponses) throw FormatError("dump does not hold responses");
  const BlockPlan plan = build_plan(dump.params);
  std::vector<ServerResponse> out;
  for (const auto& s : dump.servers) {
    ServerResponse r;
    r.server = s.server;
    r.items = unflatten(plan, s.residues, dump.params.E);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rsmm::wire
