#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwsn/engine/config.hpp"
#include "mwsn/types.hpp"

namespace mwsn::metrics {

struct NodeReport {
  NodeId id = 0;
  double initial_energy = 0.0;
  double surplus_final = 0.0;
  double consumed_tx = 0.0;
  double consumed_rx = 0.0;
  double consumed_sense = 0.0;
  double consumed_idle = 0.0;
  std::optional<double> death_time;

  friend bool operator==(const NodeReport&, const NodeReport&) = default;
};

struct RunReport {
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::E2RP;
  std::optional<double> pdf;
  double network_lifetime = 0.0;
  bool lifetime_censored = false;
  double end_time = 0.0;

  std::uint64_t packets_generated = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t packets_in_flight = 0;

  std::uint64_t rreq_floods = 0;
  std::uint64_t mac_transmissions = 0;
  std::uint64_t mac_collisions = 0;
  std::uint64_t head_changes = 0;

  std::vector<NodeReport> per_node;
  ScenarioConfig config;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

enum class ReportFormat { Json, Csv };

/// Full report as a JSON document (pretty printed, trailing newline).
std::string to_json(const RunReport& report);
/// Inverse of to_json. Throws std::runtime_error on malformed input.
RunReport from_json(std::string_view document);

inline constexpr std::string_view kCsvHeader =
    "seed,protocol,speed_max,pdf,network_lifetime,generated,delivered";

/// One CSV data row, no newline. An undefined PDF is an empty cell.
std::string csv_row(const RunReport& report);
/// Header line followed by one row per report.
std::string to_csv(std::span<const RunReport> reports);

/// Mean and standard deviation of one (protocol, speed_max) sweep cell.
/// PDF statistics cover the runs whose PDF is defined.
struct SweepCell {
  Protocol protocol = Protocol::E2RP;
  double speed_max = 0.0;
  std::size_t runs = 0;
  std::size_t pdf_runs = 0;
  double mean_pdf = 0.0;
  double sd_pdf = 0.0;
  double mean_lifetime = 0.0;
  double sd_lifetime = 0.0;
};

/// Cells ordered by (protocol, speed_max). Standard deviations are sample
/// deviations (n - 1), zero for a single run.
std::vector<SweepCell> summarize_sweep(std::span<const RunReport> reports);

inline constexpr std::string_view kSummaryHeader =
    "protocol,speed_max,runs,mean_pdf,sd_pdf,mean_lifetime,sd_lifetime";
std::string summary_csv(std::span<const SweepCell> cells);

/// Writes `document` to `path`, or to stdout when path is empty or "-".
/// Throws std::runtime_error naming the path when it cannot be written.
void write_document(const std::string& path, std::string_view document);

}  // namespace mwsn::metrics
