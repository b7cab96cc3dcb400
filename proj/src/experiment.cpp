#include "rsmm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "rsmm/decoder.hpp"
#include "rsmm/encoder.hpp"
#include "rsmm/errors.hpp"
#include "rsmm/rng.hpp"

namespace rsmm {

namespace {

using ojson = nlohmann::ordered_json;

void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown field '" + where + key + "'");
    }
  }
}

std::uint64_t get_u64(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("missing field '" + where + key + "'");
  const auto& v = obj[key];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError("field '" + where + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_double(const nlohmann::json& obj, const char* key, double fallback,
                  const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("field '" + where + key + "' must be a number");
  return obj[key].get<double>();
}

std::string subset_label(const ServerSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "-";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::string optional_rational(const std::optional<Rational>& r) {
  return r ? to_string(*r) : "n/a";
}

ojson optional_rational_json(const std::optional<Rational>& r) {
  return r ? ojson(to_string(*r)) : ojson(nullptr);
}

// Picks `count` distinct subsets of [N] deterministically, canonical order.
std::vector<ServerSet> sample_subsets(std::size_t N, std::size_t count, std::uint64_t seed) {
  std::vector<ServerSet> all = all_subsets(N);
  count = std::min(count, all.size());
  CounterRng rng(seed);
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_residue(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<ServerSet> out;
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError(name, std::string(e.kind()) + ": " + e.what());
  }
}

}  // namespace

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "csv") return ReportFormat::kCsv;
  throw ConfigError("format must be json or csv, got '" + text + "'");
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"params", "seed", "delay_model", "audit", "output"}, "");
  ExperimentConfig cfg;
  if (!doc.contains("params") || !doc["params"].is_object()) {
    throw ConfigError("missing object 'params'");
  }
  const auto& p = doc["params"];
  reject_unknown(p, {"N", "k", "l", "alpha", "q", "C", "D", "E", "m", "points"}, "params.");
  cfg.params.N = get_u64(p, "N", "params.");
  cfg.params.k = get_u64(p, "k", "params.");
  cfg.params.l = get_u64(p, "l", "params.");
  cfg.params.q = get_u64(p, "q", "params.");
  cfg.params.C = get_u64(p, "C", "params.");
  cfg.params.D = get_u64(p, "D", "params.");
  cfg.params.E = get_u64(p, "E", "params.");
  cfg.params.m = get_u64(p, "m", "params.");
  if (!p.contains("alpha") || !p["alpha"].is_string()) {
    throw ConfigError("field 'params.alpha' must be a \"num/den\" string");
  }
  try {
    cfg.params.alpha = parse_rational(p["alpha"].get<std::string>());
  } catch (const FormatError& e) {
    throw ConfigError(std::string("params.alpha: ") + e.what());
  }
  if (p.contains("points")) {
    if (!p["points"].is_array()) throw ConfigError("field 'params.points' must be an array");
    for (const auto& x : p["points"]) {
      if (!x.is_number_unsigned()) throw ConfigError("evaluation points must be integers");
      cfg.params.points.push_back(x.get<std::uint64_t>());
    }
  }
  if (doc.contains("seed")) cfg.seed = get_u64(doc, "seed", "");

  if (doc.contains("delay_model")) {
    const auto& d = doc["delay_model"];
    if (!d.is_object()) throw ConfigError("'delay_model' must be an object");
    reject_unknown(d, {"kind", "delays", "mean", "low", "high", "seed"}, "delay_model.");
    const std::string kind = d.value("kind", "exponential");
    if (kind == "deterministic") {
      cfg.delay.kind = DelayModel::Kind::kDeterministic;
      if (!d.contains("delays") || !d["delays"].is_array()) {
        throw ConfigError("deterministic delay model needs 'delays'");
      }
      for (const auto& v : d["delays"]) {
        if (!v.is_number()) throw ConfigError("delays must be numbers");
        cfg.delay.delays.push_back(v.get<double>());
      }
    } else if (kind == "exponential") {
      cfg.delay.kind = DelayModel::Kind::kExponential;
    } else if (kind == "uniform") {
      cfg.delay.kind = DelayModel::Kind::kUniform;
    } else {
      throw ConfigError("unknown delay model kind '" + kind + "'");
    }
    cfg.delay.mean = get_double(d, "mean", 1.0, "delay_model.");
    cfg.delay.low = get_double(d, "low", 0.0, "delay_model.");
    cfg.delay.high = get_double(d, "high", 1.0, "delay_model.");
    if (d.contains("seed")) cfg.delay.seed = get_u64(d, "seed", "delay_model.");
  }

  if (doc.contains("audit")) {
    const auto& a = doc["audit"];
    if (!a.is_object()) throw ConfigError("'audit' must be an object");
    reject_unknown(a, {"subsets", "exhaustive_oracle"}, "audit.");
    if (a.contains("subsets")) {
      const auto& s = a["subsets"];
      if (s.is_string() && s.get<std::string>() == "all") {
        cfg.audit.all_subsets = true;
      } else if (s.is_object() && s.contains("sampled")) {
        reject_unknown(s, {"sampled"}, "audit.subsets.");
        cfg.audit.all_subsets = false;
        cfg.audit.sampled = get_u64(s, "sampled", "audit.subsets.");
      } else {
        throw ConfigError("audit.subsets must be \"all\" or {\"sampled\": n}");
      }
    }
    if (a.contains("exhaustive_oracle")) {
      if (!a["exhaustive_oracle"].is_boolean()) {
        throw ConfigError("audit.exhaustive_oracle must be a boolean");
      }
      cfg.audit.exhaustive_oracle = a["exhaustive_oracle"].get<bool>();
    }
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (!o.is_object()) throw ConfigError("'output' must be an object");
    reject_unknown(o, {"path", "format"}, "output.");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path must be a string");
      cfg.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format must be a string");
      cfg.format = parse_format(o["format"].get<std::string>());
    }
  }

  try {
    validate_params(cfg.params);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid params (") + e.kind() + "): " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

ojson config_to_json(const ExperimentConfig& config) {
  const Params& p = config.params;
  ojson params;
  params["N"] = p.N;
  params["k"] = p.k;
  params["l"] = p.l;
  params["alpha"] = to_string(p.alpha);
  params["q"] = p.q;
  params["C"] = p.C;
  params["D"] = p.D;
  params["E"] = p.E;
  params["m"] = p.m;
  if (!p.points.empty()) params["points"] = p.points;

  ojson delay;
  delay["kind"] = to_string(config.delay.kind);
  switch (config.delay.kind) {
    case DelayModel::Kind::kDeterministic: delay["delays"] = config.delay.delays; break;
    case DelayModel::Kind::kExponential: delay["mean"] = config.delay.mean; break;
    case DelayModel::Kind::kUniform:
      delay["low"] = config.delay.low;
      delay["high"] = config.delay.high;
      break;
  }
  if (config.delay.seed) delay["seed"] = *config.delay.seed;

  ojson audit;
  if (config.audit.all_subsets) {
    audit["subsets"] = "all";
  } else {
    audit["subsets"] = ojson{{"sampled", config.audit.sampled}};
  }
  audit["exhaustive_oracle"] = config.audit.exhaustive_oracle;

  ojson out;
  out["params"] = std::move(params);
  out["seed"] = config.seed;
  out["delay_model"] = std::move(delay);
  out["audit"] = std::move(audit);
  ojson output;
  if (!config.output_path.empty()) output["path"] = config.output_path;
  output["format"] = config.format == ReportFormat::kJson ? "json" : "csv";
  out["output"] = std::move(output);
  return out;
}

DelayModel make_delay_model(const ExperimentConfig& config) {
  const DelayConfig& d = config.delay;
  const std::uint64_t seed =
      d.seed.value_or(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::kDelays)));
  switch (d.kind) {
    case DelayModel::Kind::kDeterministic: return DelayModel::deterministic(d.delays);
    case DelayModel::Kind::kExponential: return DelayModel::exponential(d.mean, seed);
    case DelayModel::Kind::kUniform: return DelayModel::uniform(d.low, d.high, seed);
  }
  return DelayModel::exponential(d.mean, seed);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

bool RunReport::passed() const {
  if (!recoverability.all_exact) return false;
  if (leakage && (!leakage->symmetric || !leakage->matches_finite || !leakage->privacy_holds)) {
    return false;
  }
  if (oracle.enabled && !oracle.within_tolerance) return false;
  return true;
}

Pipeline build_pipeline(const ExperimentConfig& config) {
  Pipeline pipe{stage("plan", [&] { return build_plan(config.params); }), {}, {}, {}, {}, {}};
  const BlockPlan& plan = pipe.plan;
  const Params& p = plan.params;
  CounterRng rng_a(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::kA)));
  CounterRng rng_b(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::kB)));
  pipe.a = random_seq(Role::kA, plan.field, p.m, p.C, p.D, rng_a);
  pipe.b = random_seq(Role::kB, plan.field, p.m, p.D, p.E, rng_b);
  pipe.shares = stage("encode", [&] {
    if (plan.scheme == SchemeCase::kCase2) {
      pipe.pool = draw_randomness(plan, derive_seed(config.seed, static_cast<std::uint64_t>(Stream::kMasks)));
    }
    return encode(pipe.a, pipe.pool, plan);
  });
  pipe.round = stage("simulate", [&] {
    return simulate_round(pipe.shares, pipe.b, make_delay_model(config), p.k);
  });
  return pipe;
}

RunReport run_experiment(const ExperimentConfig& config, Stages stages) {
  RunReport report;
  report.config = config;
  // Where the report lands does not change what it says.
  report.config.output_path.clear();
  report.config_hash = fnv1a_hex(config_to_json(report.config).dump());

  const BlockPlan plan = stage("plan", [&] { return build_plan(config.params); });
  report.scheme = plan.scheme;
  report.p = plan.p;
  report.L = plan.L;
  const Params& p = plan.params;

  if (stages.roundtrip) {
    const Pipeline pipe = build_pipeline(config);
    const MatrixSeq& a = pipe.a;
    const MatrixSeq& b = pipe.b;
    const SharePackage& shares = pipe.shares;
    const RoundResult& round = pipe.round;
    report.randomness_consumed = shares.randomness_consumed;

    MatrixSeq direct{Role::kAB, {}};
    for (std::size_t s = 0; s < p.m; ++s) direct.items.push_back(mat_mul(a.items[s], b.items[s]));

    report.trace = round.trace;
    for (const auto& r : round.responses) report.recoverability.fastest.push_back(r.server);
    std::sort(report.recoverability.fastest.begin(), report.recoverability.fastest.end());

    stage("decode", [&] {
      report.recoverability.all_exact = decode(round.responses, plan) == direct;
      report.recoverability.subsets_tested = 1;
      // Every k-subset, from responses computed without the delay model.
      const auto public_slots = align_to_slots(b, plan, p.D, p.E);
      std::vector<ServerResponse> all;
      for (const auto& server : shares.servers) all.push_back(process(server, public_slots));
      for (const auto& subset : subsets_of_size(p.N, p.k)) {
        std::vector<ServerResponse> chosen;
        for (auto id : subset) chosen.push_back(all[id - 1]);
        if (!(decode(chosen, plan) == direct)) report.recoverability.all_exact = false;
        ++report.recoverability.subsets_tested;
      }
      return 0;
    });
  }

  if (stages.audit) {
    const auto subsets =
        config.audit.all_subsets
            ? all_subsets(p.N)
            : sample_subsets(p.N, config.audit.sampled,
                             derive_seed(config.seed, static_cast<std::uint64_t>(Stream::kSubsets)));
    report.leakage = stage("audit", [&] { return audit_profile(plan, subsets); });
    if (config.audit.exhaustive_oracle) {
      report.oracle.enabled = true;
      stage("audit", [&] {
        for (const auto& entry : report.leakage->subsets) {
          const double exact = boost::rational_cast<double>(entry.measure.fraction);
          const double brute = leakage_exhaustive(plan, entry.servers);
          report.oracle.max_deviation = std::max(report.oracle.max_deviation, std::abs(exact - brute));
          ++report.oracle.subsets_checked;
        }
        return 0;
      });
      report.oracle.within_tolerance = report.oracle.max_deviation <= kOracleTolerance;
    }
  }

  if (stages.rates) report.rates = stage("rates", [&] { return rate_report(plan); });
  return report;
}

ojson report_to_json(const RunReport& report) {
  ojson out;
  out["provenance"] = ojson{{"version", kVersion},
                            {"config_hash", report.config_hash},
                            {"seed", report.config.seed}};
  out["config"] = config_to_json(report.config);
  out["plan"] = ojson{{"case", to_string(report.scheme)},
                      {"L", report.L},
                      {"p", report.p},
                      {"randomness_consumed", report.randomness_consumed}};
  out["passed"] = report.passed();

  ojson rec;
  rec["subsets_tested"] = report.recoverability.subsets_tested;
  rec["all_exact"] = report.recoverability.all_exact;
  rec["fastest"] = report.recoverability.fastest;
  out["recoverability"] = std::move(rec);

  auto& trace = out["trace"] = ojson::array();
  for (const auto& a : report.trace) trace.push_back(ojson{{"server", a.server}, {"time", a.time}});

  if (report.leakage) {
    const LeakageProfile& lp = *report.leakage;
    ojson leak;
    leak["symmetric"] = lp.symmetric;
    leak["matches_predicted_finite"] = lp.matches_finite;
    leak["privacy_holds"] = lp.privacy_holds;
    auto& profile = leak["profile"] = ojson::array();
    for (const auto& row : lp.rows) {
      profile.push_back(ojson{{"t", row.t},
                              {"predicted", to_string(row.predicted)},
                              {"predicted_finite", to_string(row.predicted_finite)},
                              {"measured", optional_rational_json(row.measured)},
                              {"subsets_checked", row.subsets_checked}});
    }
    auto& subsets = leak["subsets"] = ojson::array();
    for (const auto& s : lp.subsets) {
      subsets.push_back(ojson{{"servers", s.servers},
                              {"measured", to_string(s.measure.fraction)},
                              {"plain", to_string(s.measure.plain_fraction)},
                              {"masked", to_string(s.measure.masked_fraction)}});
    }
    if (report.oracle.enabled) {
      leak["oracle"] = ojson{{"subsets_checked", report.oracle.subsets_checked},
                             {"max_deviation", report.oracle.max_deviation},
                             {"within_tolerance", report.oracle.within_tolerance}};
    }
    out["leakage"] = std::move(leak);
  }

  if (report.rates) {
    const RateReport& r = *report.rates;
    out["rates"] = ojson{{"achieved_rate_finite", to_string(r.achieved_rate_finite)},
                         {"achieved_rate_asymptotic", to_string(r.achieved_rate_asymptotic)},
                         {"capacity_upper", to_string(r.capacity_upper)},
                         {"capacity_lower", to_string(r.capacity_lower)},
                         {"randomness_achieved", to_string(r.randomness_achieved)},
                         {"randomness_achieved_asymptotic",
                          to_string(r.randomness_achieved_asymptotic)},
                         {"randomness_upper", optional_rational_json(r.randomness_upper)},
                         {"randomness_lower", optional_rational_json(r.randomness_lower)},
                         {"square_capacity", optional_rational_json(r.square_capacity)},
                         {"square_randomness", optional_rational_json(r.square_randomness)},
                         {"product_entropy_large_q", r.product_entropy_large_q}};
  }
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> csv_rows(const RunReport& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  rows.emplace_back("provenance.version", kVersion);
  rows.emplace_back("provenance.config_hash", report.config_hash);
  rows.emplace_back("provenance.seed", std::to_string(report.config.seed));
  rows.emplace_back("plan.case", to_string(report.scheme));
  rows.emplace_back("plan.L", std::to_string(report.L));
  rows.emplace_back("plan.p", std::to_string(report.p));
  rows.emplace_back("plan.randomness_consumed", std::to_string(report.randomness_consumed));
  rows.emplace_back("passed", flag(report.passed()));
  rows.emplace_back("recoverability.subsets_tested",
                    std::to_string(report.recoverability.subsets_tested));
  rows.emplace_back("recoverability.all_exact", flag(report.recoverability.all_exact));
  std::string order;
  for (const auto& a : report.trace) order += (order.empty() ? "" : ";") + std::to_string(a.server);
  rows.emplace_back("trace.order", order.empty() ? "n/a" : order);
  const auto* lp = report.leakage ? &*report.leakage : nullptr;
  rows.emplace_back("leakage.symmetric", lp ? flag(lp->symmetric) : "n/a");
  rows.emplace_back("leakage.matches_predicted_finite", lp ? flag(lp->matches_finite) : "n/a");
  rows.emplace_back("leakage.privacy_holds", lp ? flag(lp->privacy_holds) : "n/a");
  const auto* r = report.rates ? &*report.rates : nullptr;
  auto rat = [&](auto get) { return r ? get(*r) : std::string("n/a"); };
  rows.emplace_back("rates.achieved_rate_finite",
                    rat([](const RateReport& x) { return to_string(x.achieved_rate_finite); }));
  rows.emplace_back("rates.achieved_rate_asymptotic",
                    rat([](const RateReport& x) { return to_string(x.achieved_rate_asymptotic); }));
  rows.emplace_back("rates.capacity_upper",
                    rat([](const RateReport& x) { return to_string(x.capacity_upper); }));
  rows.emplace_back("rates.capacity_lower",
                    rat([](const RateReport& x) { return to_string(x.capacity_lower); }));
  rows.emplace_back("rates.randomness_achieved",
                    rat([](const RateReport& x) { return to_string(x.randomness_achieved); }));
  rows.emplace_back("rates.randomness_achieved_asymptotic", rat([](const RateReport& x) {
                      return to_string(x.randomness_achieved_asymptotic);
                    }));
  rows.emplace_back("rates.randomness_upper",
                    rat([](const RateReport& x) { return optional_rational(x.randomness_upper); }));
  rows.emplace_back("rates.randomness_lower",
                    rat([](const RateReport& x) { return optional_rational(x.randomness_lower); }));
  rows.emplace_back("rates.square_capacity",
                    rat([](const RateReport& x) { return optional_rational(x.square_capacity); }));
  rows.emplace_back("rates.square_randomness",
                    rat([](const RateReport& x) { return optional_rational(x.square_randomness); }));
  if (lp) {
    for (const auto& s : lp->subsets) {
      rows.emplace_back("leakage.subset." + subset_label(s.servers), to_string(s.measure.fraction));
    }
  }
  return rows;
}

}  // namespace

std::size_t csv_fixed_rows() { return csv_rows(RunReport{}).size(); }

std::string emit_report(const RunReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return report_to_json(report).dump(2) + "\n";
  std::string out = "metric,value\n";
  for (const auto& [metric, value] : csv_rows(report)) out += metric + "," + value + "\n";
  return out;
}

nlohmann::ordered_json bounds_grid(std::size_t max_k) {
  ojson rows = ojson::array();
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 2}, {1, 1}, {2, 1}};
  for (std::size_t k = 2; k <= max_k; ++k) {
    for (std::size_t l = 1; l < k; ++l) {
      for (std::int64_t a = 0; a < 8; ++a) {
        for (auto [D, E] : shapes) {
          Params params;
          params.N = k;
          params.k = k;
          params.l = l;
          params.alpha = Rational(a, 8);
          params.q = 1009;
          params.C = std::lcm(k, k - l);
          params.D = D;
          params.E = E;
          params.m = 1;
          const RateReport r = rate_report(build_plan(params));
          rows.push_back(ojson{{"k", k},
                               {"l", l},
                               {"alpha", to_string(params.alpha)},
                               {"D", D},
                               {"E", E},
                               {"capacity_upper", to_string(r.capacity_upper)},
                               {"capacity_lower", to_string(r.capacity_lower)},
                               {"achieved_rate_asymptotic", to_string(r.achieved_rate_asymptotic)},
                               {"randomness_upper", optional_rational_json(r.randomness_upper)},
                               {"randomness_lower", optional_rational_json(r.randomness_lower)},
                               {"square_capacity", optional_rational_json(r.square_capacity)},
                               {"square_randomness", optional_rational_json(r.square_randomness)}});
        }
      }
    }
  }
  return rows;
}

std::string bounds_grid_csv(std::size_t max_k) {
  const ojson rows = bounds_grid(max_k);
  std::string out =
      "k,l,alpha,D,E,capacity_upper,capacity_lower,achieved_rate_asymptotic,"
      "randomness_upper,randomness_lower,square_capacity,square_randomness\n";
  for (const auto& row : rows) {
    bool first = true;
    for (const auto& [key, value] : row.items()) {
      if (!first) out += ",";
      first = false;
      if (value.is_string()) {
        out += value.get<std::string>();
      } else if (value.is_null()) {
        out += "n/a";
      } else {
        out += value.dump();
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace rsmm
