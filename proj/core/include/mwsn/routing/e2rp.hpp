#pragma once

#include <map>
#include <set>
#include <vector>

#include "mwsn/routing/agent.hpp"
#include "mwsn/routing/route_table.hpp"

namespace mwsn::routing {

/// Cluster-based multipath agent. Detectors hand readings to their precinct
/// fusion head as DAs; the head aggregates them and routes the resulting data
/// packets over the backbone of heads and gateways. Routes carry the highest
/// surplus seen along the path, relays with too little energy refuse to carry
/// replies, and a broken next hop falls over to the next stored path.
class E2rpAgent final : public RoutingAgent {
 public:
  E2rpAgent(NodeId self, RoutingHost& host, RoutingParams params);

  void originate(PacketId reading, NodeId sink) override;
  void cluster_changed() override;
  std::size_t buffered() const override;
  std::optional<NodeId> current_next_hop(NodeId destination) const override;
  std::size_t route_count(NodeId destination) const override;

  const MultipathTable& table() const { return table_; }

 protected:
  bool forwards_rreq() const override;
  Audience flood_audience() const override { return Audience::Backbone; }
  bool reflood_shorter_copies() const override { return true; }
  double initial_max_surplus() const override;
  void annotate_rreq(RreqMessage& rreq) const override;
  void answer_rreq(const RreqMessage& rreq, NodeId from) override;
  bool willing_relay() const override;
  bool install(const RrepMessage& rrep, NodeId from) override;
  RrepMessage relay_rrep(const RrepMessage& rrep) const override;
  std::optional<NodeId> next_hop(NodeId destination) override;
  void invalidate(NodeId destination, NodeId next_hop) override;
  std::uint32_t destination_sequence(NodeId destination) const override;

  void handle_da(const DaPacket& da, NodeId from) override;
  void da_failed(const DaPacket& da) override;
  void on_timer(const AgentTimer& t) override;
  void on_tick() override;
  void on_shutdown() override;

 private:
  struct Replies {
    std::uint32_t count = 0;
    double best = 0.0;
    std::uint32_t sequence = 0;
    double time = 0.0;
  };
  struct Held {
    DaPacket da;
    double since = 0.0;
  };
  struct Aggregate {
    std::vector<DaPacket> das;
    std::uint64_t token = 0;
    bool armed = false;
  };

  void aggregate(const DaPacket& da);
  void flush_aggregate(NodeId destination);
  void deliver_to_head(const DaPacket& da);
  bool same_precinct(NodeId other) const;

  MultipathTable table_;
  std::map<FloodKey, Replies> replies_;
  std::vector<Held> held_;  // DAs waiting for a reachable head
  std::map<NodeId, Aggregate> aggregates_;
  std::map<NodeId, double> direct_blocked_until_;
  std::uint64_t aggregate_token_ = 0;
};

}  // namespace mwsn::routing
