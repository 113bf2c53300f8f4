#include "mwsn/routing/agent.hpp"

#include <algorithm>

#include "mwsn/routing/aodv.hpp"
#include "mwsn/routing/e2rp.hpp"

namespace mwsn::routing {

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no-route";
    case DropReason::BufferExpired: return "buffer-expired";
    case DropReason::LinkFailure: return "link-failure";
    case DropReason::NodeDeath: return "node-death";
    case DropReason::TtlExceeded: return "ttl";
    case DropReason::Loop: return "loop";
  }
  return "?";
}

RoutingParams routing_params(const ScenarioConfig& c) {
  RoutingParams p;
  p.route_expiry = c.route_expiry;
  p.flood_state_ttl = c.flood_state_ttl;
  p.max_paths = c.max_paths;
  p.discovery_timeout = c.discovery_timeout;
  p.discovery_retries = c.discovery_retries;
  p.buffer_ttl = c.buffer_ttl;
  p.data_ttl_hops = c.data_ttl_hops;
  p.aggregation_ratio = c.aggregation_ratio;
  p.aggregation_window = c.aggregation_window;
  return p;
}

RoutingAgent::RoutingAgent(NodeId self, RoutingHost& host, RoutingParams params)
    : self_(self), host_(host), params_(params) {}

void RoutingAgent::receive(const Packet& packet, NodeId from) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DataPacket>) {
          on_data(m, from);
        } else if constexpr (std::is_same_v<T, DaPacket>) {
          handle_da(m, from);
        } else if constexpr (std::is_same_v<T, RreqMessage>) {
          on_rreq(m, from);
        } else if constexpr (std::is_same_v<T, RrepMessage>) {
          on_rrep(m, from);
        } else if constexpr (std::is_same_v<T, RerrMessage>) {
          on_rerr(m, from);
        }
      },
      packet);
}

void RoutingAgent::link_failed(const Packet& packet, NodeId next_hop) {
  if (const auto* data = std::get_if<DataPacket>(&packet)) {
    invalidate(data->destination, next_hop);
    route_data(*data);
  } else if (const auto* da = std::get_if<DaPacket>(&packet)) {
    da_failed(*da);
  }
}

void RoutingAgent::timer(const AgentTimer& t) {
  if (t.kind != AgentTimerKind::DiscoveryTimeout) {
    on_timer(t);
    return;
  }
  const auto it = pending_.find(t.destination);
  if (it == pending_.end() || !it->second.active || it->second.token != t.token) return;
  auto& d = it->second;
  if (next_hop(t.destination)) {
    flush_pending(t.destination);
  } else if (d.attempts < 1 + params_.discovery_retries) {
    send_rreq(t.destination, d);
  } else {
    d.active = false;
    auto queue = std::move(d.queue);
    d.queue.clear();
    for (const auto& b : queue) drop(b.packet, DropReason::NoRoute);
  }
}

void RoutingAgent::tick() {
  const double now = host_.now();
  for (auto& [dest, d] : pending_) {
    while (!d.queue.empty() && now - d.queue.front().since >= params_.buffer_ttl) {
      const auto packet = std::move(d.queue.front().packet);
      d.queue.pop_front();
      drop(packet, DropReason::BufferExpired);
    }
  }
  std::erase_if(seen_, [&](const auto& kv) {
    return now - kv.second.time > params_.flood_state_ttl;
  });
  std::erase_if(reverse_, [&](const auto& kv) { return now > kv.second.expires; });
  on_tick();
}

void RoutingAgent::shutdown() {
  for (auto& [dest, d] : pending_) {
    d.active = false;
    ++d.token;
    auto queue = std::move(d.queue);
    d.queue.clear();
    for (const auto& b : queue) drop(b.packet, DropReason::NodeDeath);
  }
  on_shutdown();
}

std::size_t RoutingAgent::buffered() const {
  std::size_t n = 0;
  for (const auto& [dest, d] : pending_) {
    for (const auto& b : d.queue) n += b.packet.originals.size();
  }
  return n;
}

void RoutingAgent::drop(const DataPacket& packet, DropReason reason) {
  host_.dropped(packet.originals, reason);
}

void RoutingAgent::send_unicast(Packet packet, NodeId to) {
  host_.send(self_, std::move(packet), to, Audience::All, 0.0);
}

void RoutingAgent::route_data(DataPacket packet) {
  if (packet.destination == self_) {
    host_.delivered(packet);
    return;
  }
  if (packet.path.size() > params_.data_ttl_hops) {
    drop(packet, DropReason::TtlExceeded);
    return;
  }
  if (const auto hop = next_hop(packet.destination)) {
    send_unicast(std::move(packet), *hop);
    return;
  }
  if (packet.source == self_) {
    const NodeId dest = packet.destination;
    pending_[dest].queue.push_back({std::move(packet), host_.now()});
    start_discovery(dest);
    return;
  }
  drop(packet, DropReason::NoRoute);
  send_rerr_back(packet);
}

void RoutingAgent::on_data(DataPacket packet, NodeId /*from*/) {
  if (std::find(packet.path.begin(), packet.path.end(), self_) != packet.path.end()) {
    drop(packet, DropReason::Loop);
    return;
  }
  packet.path.push_back(self_);
  route_data(std::move(packet));
}

void RoutingAgent::start_discovery(NodeId destination) {
  auto& d = pending_[destination];
  if (d.active) return;
  d.active = true;
  d.attempts = 0;
  send_rreq(destination, d);
}

void RoutingAgent::send_rreq(NodeId destination, Discovery& d) {
  ++d.attempts;
  ++d.token;
  ++floods_;
  RreqMessage rreq;
  rreq.source_address = self_;
  rreq.source_precinct = own_status().precinct;
  rreq.sequence_no = ++rreq_sequence_;
  rreq.broadcast_id = ++broadcast_id_;
  rreq.hop_count = 0;
  rreq.destination_address = destination;
  rreq.max_surplus_energy = initial_max_surplus();
  rreq.trace = {self_};
  seen_[{self_, rreq.broadcast_id}] = {0, host_.now()};
  host_.flood_started(self_, destination);
  host_.send(self_, std::move(rreq), std::nullopt, flood_audience(), 0.0);
  host_.set_timer(params_.discovery_timeout,
                  {AgentTimerKind::DiscoveryTimeout, self_, destination, d.token});
}

void RoutingAgent::flush_pending(NodeId destination) {
  const auto it = pending_.find(destination);
  if (it == pending_.end()) return;
  auto& d = it->second;
  d.active = false;
  ++d.token;
  auto queue = std::move(d.queue);
  d.queue.clear();
  for (auto& b : queue) route_data(std::move(b.packet));
}

void RoutingAgent::on_rreq(RreqMessage rreq, NodeId from) {
  if (rreq.source_address == self_) return;
  ++rreq.hop_count;

  auto& last = last_rreq_sequence_[rreq.source_address];
  if (rreq.sequence_no < last) return;  // stale flood
  last = rreq.sequence_no;

  if (rreq.destination_address == self_) {
    answer_rreq(rreq, from);
    return;
  }
  if (!forwards_rreq()) return;

  const FloodKey key{rreq.source_address, rreq.broadcast_id};
  const auto seen = seen_.find(key);
  if (seen != seen_.end() &&
      (!reflood_shorter_copies() || rreq.hop_count >= seen->second.hop_count)) {
    return;
  }
  const double now = host_.now();
  seen_[key] = {rreq.hop_count, now};
  reverse_[{rreq.source_address, rreq.destination_address}] = {
      from, now + params_.flood_state_ttl};

  annotate_rreq(rreq);
  rreq.trace.push_back(self_);
  host_.send(self_, std::move(rreq), std::nullopt, flood_audience(), host_.flood_jitter());
}

std::optional<NodeId> RoutingAgent::reverse_hop(NodeId source, NodeId destination) const {
  const auto it = reverse_.find({source, destination});
  if (it == reverse_.end() || host_.now() > it->second.expires) return std::nullopt;
  return it->second.prev_hop;
}

void RoutingAgent::on_rrep(RrepMessage rrep, NodeId from) {
  const bool at_source = rrep.source_address == self_;
  std::optional<NodeId> back;
  if (!at_source) {
    if (!rrep.route_back.empty()) {
      back = rrep.route_back.front();
      rrep.route_back.erase(rrep.route_back.begin());
    } else {
      back = reverse_hop(rrep.source_address, rrep.destination_address);
    }
  }
  if (!at_source && !willing_relay()) {
    if (back) {
      RerrMessage rerr;
      rerr.source_address = rrep.source_address;
      rerr.unreachable_destination = rrep.destination_address;
      rerr.destination_sequence = rrep.sequence_number;
      rerr.route_back = rrep.route_back;
      send_unicast(std::move(rerr), *back);
    }
    return;
  }
  if (!install(rrep, from)) return;
  if (at_source) {
    flush_pending(rrep.destination_address);
    return;
  }
  if (back) send_unicast(relay_rrep(rrep), *back);
}

void RoutingAgent::on_rerr(RerrMessage rerr, NodeId from) {
  invalidate(rerr.unreachable_destination, from);
  if (rerr.source_address == self_) return;
  std::optional<NodeId> next;
  if (!rerr.route_back.empty()) {
    next = rerr.route_back.front();
    rerr.route_back.erase(rerr.route_back.begin());
  } else {
    next = reverse_hop(rerr.source_address, rerr.unreachable_destination);
  }
  if (next) send_unicast(std::move(rerr), *next);
}

void RoutingAgent::send_rerr_back(const DataPacket& packet) {
  // path ends with this node; walk it backwards toward the source
  if (packet.path.size() < 2) return;
  RerrMessage rerr;
  rerr.source_address = packet.source;
  rerr.unreachable_destination = packet.destination;
  rerr.destination_sequence = destination_sequence(packet.destination);
  rerr.route_back.assign(packet.path.rbegin() + 1, packet.path.rend());
  const NodeId next = rerr.route_back.front();
  rerr.route_back.erase(rerr.route_back.begin());
  send_unicast(std::move(rerr), next);
}

std::unique_ptr<RoutingAgent> make_agent(Protocol protocol, NodeId self, RoutingHost& host,
                                         const RoutingParams& params) {
  if (protocol == Protocol::AODV) return std::make_unique<AodvAgent>(self, host, params);
  return std::make_unique<E2rpAgent>(self, host, params);
}

}  // namespace mwsn::routing
