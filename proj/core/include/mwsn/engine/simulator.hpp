#pragma once

#include <string>
#include <vector>

#include "mwsn/engine/config.hpp"
#include "mwsn/metrics/report.hpp"
#include "mwsn/routing/agent.hpp"
#include "mwsn/types.hpp"

namespace mwsn {

/// Deterministic overrides for hand-built scenarios. An empty script leaves
/// the configured random scenario untouched.
struct ScenarioScript {
  std::vector<Vec2> positions;        // initial positions, one per node
  bool static_nodes = false;          // nobody moves
  std::vector<double> initial_energy; // per-node battery, J
  bool idle_drain = true;

  struct Kill {
    double time = 0.0;
    NodeId node = kNoNode;
  };
  std::vector<Kill> kills;            // node failures (not energy deaths)

  struct Reading {
    double time = 0.0;
    NodeId node = kNoNode;
  };
  std::vector<Reading> readings;      // extra sensing events at given nodes
  bool random_traffic = true;

  struct Probe {
    double time = 0.0;
    NodeId node = kNoNode;
    NodeId destination = kNoNode;
  };
  std::vector<Probe> probes;          // route-table snapshots for the audit
};

struct SimOptions {
  bool trace = false;  // keep the line-oriented event log
  bool audit = false;  // keep route mutations, flood records and data paths
};

struct FloodRecord {
  double time = 0.0;
  NodeId origin = kNoNode;
  NodeId destination = kNoNode;
  std::size_t routes_at_origin = 0;  // usable routes the origin held
};

struct AnsweredRreq {
  double time = 0.0;
  NodeId destination = kNoNode;
  routing::RreqMessage rreq;
};

struct ProbeResult {
  double time = 0.0;
  NodeId node = kNoNode;
  NodeId destination = kNoNode;
  std::size_t routes = 0;
  std::optional<NodeId> next_hop;
};

struct RunAudit {
  std::vector<routing::RouteMutation> mutations;
  std::vector<FloodRecord> floods;
  std::vector<AnsweredRreq> answered;
  std::vector<std::vector<NodeId>> delivered_paths;  // hop sequence of each delivered DATA
  std::vector<ProbeResult> probes;
  std::uint64_t loop_drops = 0;
};

struct RunResult {
  metrics::RunReport report;
  RunAudit audit;
  std::string trace;
};

/// Runs one scenario from t = 0 until sim_duration or until every node is
/// dead. Identical inputs give identical results. Throws ConfigError when the
/// configuration is invalid or the script does not match it.
RunResult simulate(const ScenarioConfig& config, const ScenarioScript& script = {},
                   const SimOptions& options = {});

/// Shorthand for simulate(config).report.
metrics::RunReport run(const ScenarioConfig& config);

}  // namespace mwsn
