#include "mwsn/routing/aodv.hpp"

namespace mwsn::routing {

AodvAgent::AodvAgent(NodeId self, RoutingHost& host, RoutingParams params)
    : RoutingAgent(self, host, params) {}

void AodvAgent::originate(PacketId reading, NodeId sink) {
  DataPacket p;
  p.id = host_.next_packet_id();
  p.source = self_;
  p.destination = sink;
  p.generation_time = host_.now();
  p.originals = {reading};
  p.path = {self_};
  route_data(std::move(p));
}

void AodvAgent::answer_rreq(const RreqMessage& rreq, NodeId from) {
  const FloodKey key{rreq.source_address, rreq.broadcast_id};
  if (answered_.contains(key)) return;
  answered_[key] = host_.now();

  RrepMessage rrep;
  rrep.source_address = rreq.source_address;
  rrep.destination_address = self_;
  rrep.destination_precinct = own_status().precinct;
  rrep.sequence_number = ++own_sequence_;
  rrep.hop_count = 0;
  rrep.max_surplus_energy = rreq.max_surplus_energy;
  // retrace the copy being answered; its last hop is `from`
  rrep.route_back.assign(rreq.trace.rbegin() + 1, rreq.trace.rend());
  host_.rreq_answered(self_, rreq);
  send_unicast(std::move(rrep), from);
}

bool AodvAgent::install(const RrepMessage& rrep, NodeId from) {
  const NodeId dest = rrep.destination_address;
  RouteMutation m;
  m.time = host_.now();
  m.node = self_;
  m.destination = dest;
  m.sequence = rrep.sequence_number;
  m.path_hops = rrep.hop_count + 1;
  m.upstream_advertised = rrep.hop_count;
  if (const auto* r = table_.find(dest)) {
    m.advertised_before = r->hop_count;
    m.same_sequence = r->sequence_number == rrep.sequence_number;
  }
  const auto r = table_.offer(dest, rrep.sequence_number, from, m.path_hops,
                              m.time + params_.route_expiry);
  m.accepted = accepted(r);
  host_.route_mutation(m);
  return m.accepted;
}

RrepMessage AodvAgent::relay_rrep(const RrepMessage& rrep) const {
  RrepMessage fwd = rrep;
  fwd.hop_count = rrep.hop_count + 1;
  return fwd;
}

std::optional<NodeId> AodvAgent::next_hop(NodeId destination) {
  const double now = host_.now();
  const auto* r = table_.lookup(destination, now);
  if (!r) return std::nullopt;
  const NodeId hop = r->next_hop;
  table_.refresh(destination, now + params_.route_expiry);
  return hop;
}

std::optional<NodeId> AodvAgent::current_next_hop(NodeId destination) const {
  const auto* r = table_.lookup(destination, host_.now());
  if (!r) return std::nullopt;
  return r->next_hop;
}

std::size_t AodvAgent::route_count(NodeId destination) const {
  return table_.lookup(destination, host_.now()) ? 1 : 0;
}

void AodvAgent::invalidate(NodeId destination, NodeId next_hop) {
  table_.invalidate(destination, next_hop);
}

std::uint32_t AodvAgent::destination_sequence(NodeId destination) const {
  const auto* r = table_.find(destination);
  return r ? r->sequence_number : 0;
}

void AodvAgent::on_tick() {
  const double now = host_.now();
  std::erase_if(answered_, [&](const auto& kv) { return now - kv.second > params_.flood_state_ttl; });
}

}  // namespace mwsn::routing
