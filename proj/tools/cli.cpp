#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "mwsn/engine/config.hpp"
#include "mwsn/engine/simulator.hpp"
#include "mwsn/metrics/report.hpp"

namespace mwsn::cli {

namespace {

constexpr int kUsage = 2;
constexpr int kFailure = 1;

void emit(const std::string& path, const std::string& document, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << document;
  } else {
    metrics::write_document(path, document);
  }
}

Protocol protocol_arg(const std::string& text) {
  const auto p = parse_protocol(text);
  if (!p) throw ConfigError("unknown protocol '" + text + "' (expected e2rp or aodv)", "protocol");
  return *p;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string protocol;
  std::string out;
  std::string format = "json";
  std::string trace;
};

struct SweepArgs {
  std::string config;
  std::uint64_t seeds = 10;
  std::vector<std::string> protocols{"e2rp", "aodv"};
  std::vector<double> speeds;
  std::string out;
  std::string summary;
};

int do_run(const RunArgs& a, std::ostream& out) {
  auto cfg = load_config(a.config);
  if (a.seed) cfg.rng_seed = *a.seed;
  if (!a.protocol.empty()) cfg.protocol = protocol_arg(a.protocol);
  validate(cfg);

  SimOptions options;
  options.trace = !a.trace.empty();
  const auto result = simulate(cfg, {}, options);
  if (options.trace) metrics::write_document(a.trace, result.trace);

  if (a.format == "csv") {
    emit(a.out, metrics::to_csv(std::span(&result.report, 1)), out);
  } else {
    emit(a.out, metrics::to_json(result.report), out);
  }
  return 0;
}

int do_sweep(const SweepArgs& a, std::ostream& out) {
  const ScenarioConfig base = a.config.empty() ? ScenarioConfig{} : load_config(a.config);
  std::vector<Protocol> protocols;
  for (const auto& p : a.protocols) protocols.push_back(protocol_arg(p));
  std::vector<double> speeds = a.speeds;
  if (speeds.empty()) speeds.push_back(base.speed_max);

  std::vector<metrics::RunReport> reports;
  for (Protocol protocol : protocols) {
    for (double speed : speeds) {
      for (std::uint64_t i = 0; i < a.seeds; ++i) {
        ScenarioConfig cfg = base;
        cfg.protocol = protocol;
        cfg.speed_max = speed;
        cfg.speed_min = std::min(cfg.speed_min, speed);
        cfg.rng_seed = base.rng_seed + i;
        validate(cfg);
        reports.push_back(run(cfg));
      }
    }
  }
  std::sort(reports.begin(), reports.end(), [](const auto& x, const auto& y) {
    const auto kx = std::make_tuple(to_string(x.protocol), x.config.speed_max, x.seed);
    const auto ky = std::make_tuple(to_string(y.protocol), y.config.speed_max, y.seed);
    return kx < ky;
  });
  emit(a.out, metrics::to_csv(reports), out);
  if (!a.summary.empty()) {
    const auto cells = metrics::summarize_sweep(reports);
    emit(a.summary, metrics::summary_csv(cells), out);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mobile wireless sensor network simulator"};
  app.name("mwsn-sim");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and emit its report");
  run_cmd->add_option("--config", run_args.config, "Scenario file")->required();
  run_cmd->add_option("--seed", run_args.seed, "Override rng_seed");
  run_cmd->add_option("--protocol", run_args.protocol, "e2rp or aodv");
  run_cmd->add_option("--out", run_args.out, "Output file (default stdout)");
  run_cmd->add_option("--format", run_args.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--trace", run_args.trace, "Write the event log to this file");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a scenario over seeds, speeds and protocols");
  sweep_cmd->add_option("--config", sweep_args.config, "Scenario file (default: built-in defaults)");
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Number of seeds, counted up from rng_seed")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--protocols", sweep_args.protocols, "Comma separated protocol list")
      ->delimiter(',');
  sweep_cmd->add_option("--speeds", sweep_args.speeds, "Comma separated speed_max values")
      ->delimiter(',');
  sweep_cmd->add_option("--out", sweep_args.out, "Per-run CSV file (default stdout)");
  sweep_cmd->add_option("--summary", sweep_args.summary,
                        "Write per (protocol, speed) means and deviations here");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--config", validate_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "mwsn-sim: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kUsage;
  }

  try {
    if (run_cmd->parsed()) return do_run(run_args, out);
    if (sweep_cmd->parsed()) return do_sweep(sweep_args, out);
    load_config(validate_path);
    out << validate_path << ": ok\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "mwsn-sim: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "mwsn-sim: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace mwsn::cli
