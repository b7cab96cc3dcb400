// Command-line runner for the private batch matrix-multiplication scheme.
//
//   rsmm run       --config cfg.json [--seed S] [--out path] [--format json|csv]
//   rsmm roundtrip --config cfg.json [--shares-out f] [--responses-out f] [--dump-format bin|json]
//   rsmm audit     --config cfg.json
//   rsmm bounds    [--config cfg.json] [--max-k 8]
//
// Exit status: 0 all checks pass, 1 an invariant failed, 2 bad config.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rsmm/errors.hpp"
#include "rsmm/experiment.hpp"
#include "rsmm/wire.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
  auto* cfg = cmd->add_option("--config", opts.config, "Experiment config (JSON)");
  if (config_required) cfg->required();
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_option("--out", opts.out, "Write the report here instead of stdout");
  cmd->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
}

rsmm::ExperimentConfig resolve(const CommonOptions& opts) {
  rsmm::ExperimentConfig cfg = rsmm::load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (!opts.out.empty()) cfg.output_path = opts.out;
  if (!opts.format.empty()) cfg.format = rsmm::parse_format(opts.format);
  return cfg;
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << bytes;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_dump(const std::string& path, const rsmm::wire::Dump& dump, const std::string& format) {
  if (format == "json") {
    write_output(path, rsmm::wire::to_json(dump).dump(2) + "\n");
  } else {
    const auto bytes = rsmm::wire::to_binary(dump);
    write_output(path, std::string(bytes.begin(), bytes.end()));
  }
}

int run_stages(const CommonOptions& opts, rsmm::Stages stages) {
  const rsmm::ExperimentConfig cfg = resolve(opts);
  const rsmm::RunReport report = rsmm::run_experiment(cfg, stages);
  write_output(cfg.output_path, rsmm::emit_report(report, cfg.format));
  if (!report.passed()) {
    std::cerr << "rsmm: invariant check failed (see report)\n";
    return kExitFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private distributed batch matrix multiplication simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, audit_opts, rt_opts, bounds_opts;
  auto* run = app.add_subcommand("run", "Full pipeline: encode, simulate, decode, audit, rates");
  add_common(run, run_opts, true);

  auto* audit = app.add_subcommand("audit", "Leakage audit only");
  add_common(audit, audit_opts, true);

  auto* roundtrip = app.add_subcommand("roundtrip", "Encode, simulate and decode only");
  add_common(roundtrip, rt_opts, true);
  std::string shares_out, responses_out, dump_format = "bin";
  roundtrip->add_option("--shares-out", shares_out, "Write the share dump here");
  roundtrip->add_option("--responses-out", responses_out, "Write the k fastest responses here");
  roundtrip->add_option("--dump-format", dump_format, "Dump encoding")
      ->check(CLI::IsMember({"bin", "json"}));

  auto* bounds = app.add_subcommand("bounds", "Capacity and randomness bounds");
  add_common(bounds, bounds_opts, false);
  std::size_t max_k = 8;
  bounds->add_option("--max-k", max_k, "Largest k in the grid")->check(CLI::Range(2, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return run_stages(run_opts, {});
    if (*audit) return run_stages(audit_opts, {false, true, false});
    if (*roundtrip) {
      const rsmm::ExperimentConfig cfg = resolve(rt_opts);
      if (!shares_out.empty() || !responses_out.empty()) {
        const rsmm::Pipeline pipe = rsmm::build_pipeline(cfg);
        if (!shares_out.empty()) {
          write_dump(shares_out, rsmm::wire::make_dump(pipe.shares, cfg.seed), dump_format);
        }
        if (!responses_out.empty()) {
          write_dump(responses_out, rsmm::wire::make_dump(pipe.plan, pipe.round.responses, cfg.seed),
                     dump_format);
        }
      }
      return run_stages(rt_opts, {true, false, true});
    }
    if (*bounds) {
      if (!bounds_opts.config.empty()) return run_stages(bounds_opts, {false, false, true});
      const std::string format = bounds_opts.format.empty() ? "json" : bounds_opts.format;
      write_output(bounds_opts.out, format == "csv" ? rsmm::bounds_grid_csv(max_k)
                                                    : rsmm::bounds_grid(max_k).dump(2) + "\n");
      return kExitOk;
    }
  } catch (const rsmm::ConfigError& e) {
    std::cerr << "rsmm: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rsmm::StageError& e) {
    std::cerr << "rsmm: stage '" << e.stage() << "' failed: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "rsmm: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}
