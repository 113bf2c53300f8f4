#include "mwsn/routing/e2rp.hpp"

#include <algorithm>
#include <cmath>

#include "mwsn/routing/drain.hpp"

namespace mwsn::routing {

E2rpAgent::E2rpAgent(NodeId self, RoutingHost& host, RoutingParams params)
    : RoutingAgent(self, host, params) {}

void E2rpAgent::originate(PacketId reading, NodeId sink) {
  const auto st = own_status();
  const DaPacket da{self_, st.vid, host_.now(), reading, sink};
  if (st.head) {
    aggregate(da);
  } else {
    deliver_to_head(da);
  }
}

void E2rpAgent::deliver_to_head(const DaPacket& da) {
  const auto head = host_.fusion_head_of(self_);
  if (!head) {
    held_.push_back({da, host_.now()});
  } else if (*head == self_) {
    aggregate(da);
  } else {
    send_unicast(da, *head);
  }
}

void E2rpAgent::cluster_changed() {
  if (held_.empty()) return;
  const auto head = host_.fusion_head_of(self_);
  if (!head) return;
  auto held = std::move(held_);
  held_.clear();
  for (const auto& h : held) {
    if (*head == self_) {
      aggregate(h.da);
    } else {
      send_unicast(h.da, *head);
    }
  }
}

void E2rpAgent::handle_da(const DaPacket& da, NodeId /*from*/) { aggregate(da); }

void E2rpAgent::da_failed(const DaPacket& da) {
  // the buffer TTL runs from generation, so a reading cannot bounce forever
  held_.push_back({da, da.generation_time});
}

void E2rpAgent::aggregate(const DaPacket& da) {
  auto& a = aggregates_[da.destination];
  a.das.push_back(da);
  if (a.armed) return;
  a.armed = true;
  a.token = ++aggregate_token_;
  host_.set_timer(params_.aggregation_window,
                  {AgentTimerKind::AggregationFlush, self_, da.destination, a.token});
}

void E2rpAgent::on_timer(const AgentTimer& t) {
  if (t.kind != AgentTimerKind::AggregationFlush) return;
  const auto it = aggregates_.find(t.destination);
  if (it == aggregates_.end() || !it->second.armed || it->second.token != t.token) return;
  flush_aggregate(t.destination);
}

void E2rpAgent::flush_aggregate(NodeId destination) {
  auto& a = aggregates_[destination];
  auto das = std::move(a.das);
  a.das.clear();
  a.armed = false;
  if (das.empty()) return;

  const auto k = das.size();
  const auto wanted = static_cast<std::size_t>(
      std::ceil(static_cast<double>(k) * params_.aggregation_ratio - 1e-9));
  const auto m = std::clamp<std::size_t>(wanted, 1, k);

  std::vector<DataPacket> out(m);
  for (auto& p : out) {
    p.id = host_.next_packet_id();
    p.source = self_;
    p.destination = destination;
    p.generation_time = kInfinity;
    p.path = {self_};
  }
  for (std::size_t i = 0; i < k; ++i) {
    auto& p = out[i % m];
    p.originals.push_back(das[i].reading);
    p.generation_time = std::min(p.generation_time, das[i].generation_time);
  }
  for (auto& p : out) route_data(std::move(p));
}

void E2rpAgent::on_tick() {
  const double now = host_.now();
  std::erase_if(held_, [&](const Held& h) {
    if (now - h.since < params_.buffer_ttl) return false;
    const PacketId reading = h.da.reading;
    host_.dropped(std::span<const PacketId>(&reading, 1), DropReason::BufferExpired);
    return true;
  });
  std::erase_if(replies_, [&](const auto& kv) {
    return now - kv.second.time > params_.flood_state_ttl;
  });
}

void E2rpAgent::on_shutdown() {
  std::vector<PacketId> lost;
  for (const auto& h : held_) lost.push_back(h.da.reading);
  for (auto& [dest, a] : aggregates_) {
    for (const auto& da : a.das) lost.push_back(da.reading);
    a.das.clear();
    a.armed = false;
  }
  held_.clear();
  if (!lost.empty()) host_.dropped(lost, DropReason::NodeDeath);
}

std::size_t E2rpAgent::buffered() const {
  std::size_t n = RoutingAgent::buffered() + held_.size();
  for (const auto& [dest, a] : aggregates_) n += a.das.size();
  return n;
}

bool E2rpAgent::forwards_rreq() const {
  const auto st = own_status();
  return st.head || st.gateway;
}

double E2rpAgent::initial_max_surplus() const { return own_status().surplus; }

void E2rpAgent::annotate_rreq(RreqMessage& rreq) const {
  rreq.max_surplus_energy = std::max(rreq.max_surplus_energy, own_status().surplus);
}

void E2rpAgent::answer_rreq(const RreqMessage& rreq, NodeId from) {
  auto& r = replies_[{rreq.source_address, rreq.broadcast_id}];
  if (r.count == 0) {
    r.sequence = ++own_sequence_;
  } else if (r.count >= params_.max_paths || !(rreq.max_surplus_energy > r.best)) {
    return;
  }
  r.best = rreq.max_surplus_energy;
  r.time = host_.now();
  ++r.count;

  RrepMessage rrep;
  rrep.source_address = rreq.source_address;
  rrep.destination_address = self_;
  rrep.destination_precinct = own_status().precinct;
  rrep.sequence_number = r.sequence;
  rrep.hop_count = 0;
  rrep.readiness_factor = Readiness::High;
  rrep.max_surplus_energy = rreq.max_surplus_energy;
  rrep.lifetime = kInfinity;
  // retrace the copy being answered; its last hop is `from`
  rrep.route_back.assign(rreq.trace.rbegin() + 1, rreq.trace.rend());
  host_.rreq_answered(self_, rreq);
  send_unicast(std::move(rrep), from);
}

bool E2rpAgent::willing_relay() const {
  const auto st = own_status();
  return compute_readiness(st.surplus, st.lifetime) != Readiness::Discard;
}

bool E2rpAgent::install(const RrepMessage& rrep, NodeId from) {
  const NodeId dest = rrep.destination_address;
  const RoutePath path{from, rrep.hop_count + 1, rrep.readiness_factor,
                       rrep.max_surplus_energy, rrep.lifetime};
  RouteMutation m;
  m.time = host_.now();
  m.node = self_;
  m.destination = dest;
  m.sequence = rrep.sequence_number;
  m.path_hops = path.hop_count;
  m.upstream_advertised = rrep.hop_count;
  if (const auto* e = table_.find(dest); e && e->established) {
    m.advertised_before = e->advertised_hop_count;
    m.same_sequence = e->sequence_number == rrep.sequence_number;
  }
  const auto r = table_.offer(dest, rrep.sequence_number, path, rrep.hop_count,
                              params_.max_paths, m.time + params_.route_expiry);
  m.accepted = accepted(r);
  host_.route_mutation(m);
  return m.accepted;
}

RrepMessage E2rpAgent::relay_rrep(const RrepMessage& rrep) const {
  const auto st = own_status();
  RrepMessage fwd = rrep;
  fwd.hop_count = table_.find(rrep.destination_address)->advertised_hop_count;
  fwd.readiness_factor = std::min(rrep.readiness_factor, compute_readiness(st.surplus, st.lifetime));
  fwd.lifetime = std::min(rrep.lifetime, st.lifetime);
  return fwd;
}

bool E2rpAgent::same_precinct(NodeId other) const {
  return host_.status(other).precinct == own_status().precinct;
}

std::optional<NodeId> E2rpAgent::next_hop(NodeId destination) {
  const double now = host_.now();
  if (same_precinct(destination) && direct_blocked_until_[destination] <= now) {
    return destination;
  }
  if (const auto* p = table_.lookup(destination, now)) {
    const NodeId hop = p->next_hop;
    table_.refresh(destination, now + params_.route_expiry);
    return hop;
  }
  return std::nullopt;
}

std::optional<NodeId> E2rpAgent::current_next_hop(NodeId destination) const {
  const double now = host_.now();
  if (same_precinct(destination)) {
    const auto it = direct_blocked_until_.find(destination);
    if (it == direct_blocked_until_.end() || it->second <= now) return destination;
  }
  if (const auto* p = table_.lookup(destination, now)) return p->next_hop;
  return std::nullopt;
}

std::size_t E2rpAgent::route_count(NodeId destination) const {
  const auto* e = table_.find(destination);
  if (!e || host_.now() >= e->expiration_time) return 0;
  return e->route_list.size();
}

void E2rpAgent::invalidate(NodeId destination, NodeId next_hop) {
  if (next_hop == destination) {
    direct_blocked_until_[destination] = host_.now() + params_.discovery_timeout;
  }
  table_.prune(destination, next_hop);
}

std::uint32_t E2rpAgent::destination_sequence(NodeId destination) const {
  const auto* e = table_.find(destination);
  return e ? e->sequence_number : 0;
}

}  // namespace mwsn::routing
