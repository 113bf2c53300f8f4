#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>

#include "mwsn/engine/config.hpp"
#include "mwsn/routing/messages.hpp"
#include "mwsn/types.hpp"

namespace mwsn::routing {

/// Who a broadcast is addressed to. Only addressed nodes process it (and pay
/// for receiving it).
enum class Audience : std::uint8_t {
  All,       // every node in range
  Precinct,  // members of the sender's precinct
  Backbone,  // fusion heads and gateways, plus the RREQ destination
};

enum class DropReason : std::uint8_t {
  NoRoute,
  BufferExpired,
  LinkFailure,
  NodeDeath,
  TtlExceeded,
  Loop,
};

std::string_view to_string(DropReason r);

struct NodeStatus {
  bool alive = true;
  double surplus = 0.0;
  double lifetime = kInfinity;  // drain-based estimate, s
  double vid = 0.0;
  bool head = false;
  bool gateway = false;
  PrecinctCoord precinct;
};

/// Audit record of one route-table offer.
struct RouteMutation {
  double time = 0.0;
  NodeId node = kNoNode;
  NodeId destination = kNoNode;
  std::uint32_t sequence = 0;
  std::uint32_t path_hops = 0;
  std::uint32_t upstream_advertised = 0;
  std::uint32_t advertised_before = 0;
  bool same_sequence = false;  // the entry existed at this sequence number
  bool accepted = false;
};

enum class AgentTimerKind : std::uint8_t { DiscoveryTimeout, AggregationFlush };

struct AgentTimer {
  AgentTimerKind kind = AgentTimerKind::DiscoveryTimeout;
  NodeId node = kNoNode;
  NodeId destination = kNoNode;
  std::uint64_t token = 0;
};

/// Services the simulator provides to routing agents.
class RoutingHost {
 public:
  virtual ~RoutingHost() = default;
  virtual double now() const = 0;
  virtual NodeStatus status(NodeId node) const = 0;
  virtual std::optional<NodeId> fusion_head_of(NodeId node) const = 0;
  virtual PacketId next_packet_id() = 0;
  /// Random forwarding delay for flooded packets.
  virtual double flood_jitter() = 0;
  /// Hands a packet to the MAC after `delay` seconds. `to` unset: broadcast.
  virtual void send(NodeId from, Packet packet, std::optional<NodeId> to, Audience audience,
                    double delay) = 0;
  virtual void set_timer(double delay, const AgentTimer& timer) = 0;

  virtual void delivered(const DataPacket& packet) = 0;
  virtual void dropped(std::span<const PacketId> originals, DropReason reason) = 0;
  virtual void route_mutation(const RouteMutation&) {}
  virtual void flood_started(NodeId /*origin*/, NodeId /*destination*/) {}
  /// The destination answered this RREQ copy.
  virtual void rreq_answered(NodeId /*destination*/, const RreqMessage&) {}
};

struct RoutingParams {
  double route_expiry = 10.0;
  double flood_state_ttl = 2.0;
  std::uint32_t max_paths = 3;
  double discovery_timeout = 1.0;
  std::uint32_t discovery_retries = 2;
  double buffer_ttl = 5.0;
  std::uint32_t data_ttl_hops = 32;
  double aggregation_ratio = 0.25;
  double aggregation_window = 0.1;
};

RoutingParams routing_params(const ScenarioConfig& config);

/// Reactive on-demand routing shared by both protocols: flooding with
/// duplicate suppression, reverse-path RREP return, buffered discovery with
/// retries, hop-by-hop data forwarding and RERR propagation. Subclasses supply
/// the route table and the forwarding policy.
class RoutingAgent {
 public:
  RoutingAgent(NodeId self, RoutingHost& host, RoutingParams params);
  virtual ~RoutingAgent() = default;
  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId id() const { return self_; }

  /// A reading sensed at this node, bound for `sink`.
  virtual void originate(PacketId reading, NodeId sink) = 0;

  void receive(const Packet& packet, NodeId from);
  /// A unicast to `next_hop` failed after every MAC retry.
  void link_failed(const Packet& packet, NodeId next_hop);
  void timer(const AgentTimer& t);
  /// Periodic housekeeping: buffered data past its TTL is dropped and old
  /// flood state forgotten.
  void tick();
  /// Called after every clustering round.
  virtual void cluster_changed() {}
  /// The node died. Everything it still holds is dropped.
  void shutdown();

  /// Readings held by this agent (discovery buffers and the like).
  virtual std::size_t buffered() const;
  std::uint32_t floods_started() const { return floods_; }
  /// Next hop currently used toward `destination`, if any.
  virtual std::optional<NodeId> current_next_hop(NodeId destination) const = 0;
  /// Usable stored routes toward `destination`.
  virtual std::size_t route_count(NodeId destination) const = 0;

 protected:
  using FloodKey = std::pair<NodeId, std::uint32_t>;  // (source, broadcast id)
  using PairKey = std::pair<NodeId, NodeId>;           // (source, destination)

  virtual bool forwards_rreq() const = 0;
  virtual Audience flood_audience() const = 0;
  /// Whether a later copy with a strictly smaller hop count is re-flooded.
  virtual bool reflood_shorter_copies() const = 0;
  virtual double initial_max_surplus() const { return 0.0; }
  virtual void annotate_rreq(RreqMessage&) const {}
  virtual void answer_rreq(const RreqMessage& rreq, NodeId from) = 0;
  /// Whether this node relays RREPs right now; a refusing relay turns the
  /// RREP into an RERR toward the source.
  virtual bool willing_relay() const { return true; }
  virtual bool install(const RrepMessage& rrep, NodeId from) = 0;
  virtual RrepMessage relay_rrep(const RrepMessage& rrep) const = 0;
  /// Next hop for data, refreshing the route on use.
  virtual std::optional<NodeId> next_hop(NodeId destination) = 0;
  virtual void invalidate(NodeId destination, NodeId next_hop) = 0;
  virtual std::uint32_t destination_sequence(NodeId /*destination*/) const { return 0; }

  virtual void handle_da(const DaPacket&, NodeId /*from*/) {}
  virtual void da_failed(const DaPacket&) {}
  virtual void on_timer(const AgentTimer&) {}
  virtual void on_tick() {}
  virtual void on_shutdown() {}

  void route_data(DataPacket packet);
  void drop(const DataPacket& packet, DropReason reason);
  void send_unicast(Packet packet, NodeId to);
  NodeStatus own_status() const { return host_.status(self_); }

  NodeId self_;
  RoutingHost& host_;
  RoutingParams params_;
  std::uint32_t own_sequence_ = 0;  // destination sequence number

 private:
  struct Seen {
    std::uint32_t hop_count = 0;
    double time = 0.0;
  };
  struct Reverse {
    NodeId prev_hop = kNoNode;
    double expires = 0.0;
  };
  struct Buffered {
    DataPacket packet;
    double since = 0.0;
  };
  struct Discovery {
    bool active = false;
    std::uint32_t attempts = 0;
    std::uint64_t token = 0;
    std::deque<Buffered> queue;
  };

  void on_data(DataPacket packet, NodeId from);
  void on_rreq(RreqMessage rreq, NodeId from);
  void on_rrep(RrepMessage rrep, NodeId from);
  void on_rerr(RerrMessage rerr, NodeId from);
  void start_discovery(NodeId destination);
  void send_rreq(NodeId destination, Discovery& d);
  void flush_pending(NodeId destination);
  void send_rerr_back(const DataPacket& packet);
  std::optional<NodeId> reverse_hop(NodeId source, NodeId destination) const;

  std::uint32_t rreq_sequence_ = 0;
  std::uint32_t broadcast_id_ = 0;
  std::uint32_t floods_ = 0;
  std::map<NodeId, std::uint32_t> last_rreq_sequence_;
  std::map<FloodKey, Seen> seen_;
  std::map<PairKey, Reverse> reverse_;
  std::map<NodeId, Discovery> pending_;
};

std::unique_ptr<RoutingAgent> make_agent(Protocol protocol, NodeId self, RoutingHost& host,
                                         const RoutingParams& params);

}  // namespace mwsn::routing
