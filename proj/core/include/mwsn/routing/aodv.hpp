#pragma once

#include <set>

#include "mwsn/routing/agent.hpp"
#include "mwsn/routing/route_table.hpp"

namespace mwsn::routing {

/// Flat single-path on-demand routing: every node rebroadcasts the first copy
/// of a request, the destination answers once per flood, and any broken link
/// invalidates the route.
class AodvAgent final : public RoutingAgent {
 public:
  AodvAgent(NodeId self, RoutingHost& host, RoutingParams params);

  void originate(PacketId reading, NodeId sink) override;
  std::optional<NodeId> current_next_hop(NodeId destination) const override;
  std::size_t route_count(NodeId destination) const override;

  const SingleRouteTable& table() const { return table_; }

 protected:
  bool forwards_rreq() const override { return true; }
  Audience flood_audience() const override { return Audience::All; }
  bool reflood_shorter_copies() const override { return false; }
  void answer_rreq(const RreqMessage& rreq, NodeId from) override;
  bool install(const RrepMessage& rrep, NodeId from) override;
  RrepMessage relay_rrep(const RrepMessage& rrep) const override;
  std::optional<NodeId> next_hop(NodeId destination) override;
  void invalidate(NodeId destination, NodeId next_hop) override;
  std::uint32_t destination_sequence(NodeId destination) const override;
  void on_tick() override;

 private:
  SingleRouteTable table_;
  std::map<FloodKey, double> answered_;
};

}  // namespace mwsn::routing
