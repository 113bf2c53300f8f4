#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "mwsn/types.hpp"

namespace mwsn::routing {

/// Routing willingness of a node, ordered Discard < Moderate < High.
enum class Readiness : std::uint8_t { Discard = 0, Moderate = 1, High = 2 };

std::string_view to_string(Readiness r);

/// Periodic precinct advertisement used by the fusion-head election.
struct HelloPacket {
  NodeId sender = kNoNode;
  double surplus = 0.0;
  double p_fusion = 0.0;
  double vid = 0.0;
};

/// Data announcement from an event detector to its fusion head. `reading`
/// identifies the source-generated data unit it carries.
struct DaPacket {
  NodeId sender = kNoNode;
  double vid = 0.0;
  double generation_time = 0.0;
  PacketId reading = 0;
  NodeId destination = kNoNode;
};

struct DataPacket {
  PacketId id = 0;
  NodeId source = kNoNode;
  NodeId destination = kNoNode;
  double generation_time = 0.0;
  std::vector<PacketId> originals;  // source-generated readings carried
  std::vector<NodeId> path;         // nodes visited so far, source first
};

struct RreqMessage {
  NodeId source_address = kNoNode;
  PrecinctCoord source_precinct;
  std::uint32_t sequence_no = 0;
  std::uint32_t broadcast_id = 0;
  std::uint32_t hop_count = 0;
  NodeId destination_address = kNoNode;
  double max_surplus_energy = 0.0;
  std::vector<NodeId> trace;  // nodes this copy traversed, source first
};

struct RrepMessage {
  NodeId source_address = kNoNode;
  NodeId destination_address = kNoNode;
  PrecinctCoord destination_precinct;
  std::uint32_t sequence_number = 0;
  std::uint32_t hop_count = 0;  // sender's advertised hop count
  Readiness readiness_factor = Readiness::High;
  double max_surplus_energy = 0.0;
  double lifetime = kInfinity;
  std::vector<NodeId> route_back;  // rest of the answered copy's trace, next hop first
};

/// Route error. Travels toward `source_address` along `route_back` when it is
/// non-empty, otherwise along the reverse path of the (source, destination)
/// flood.
struct RerrMessage {
  NodeId source_address = kNoNode;
  NodeId unreachable_destination = kNoNode;
  std::uint32_t destination_sequence = 0;
  std::vector<NodeId> route_back;
};

using Packet =
    std::variant<HelloPacket, DaPacket, DataPacket, RreqMessage, RrepMessage, RerrMessage>;

bool is_data(const Packet& p);
std::string_view kind_name(const Packet& p);

/// Nominal on-air size: data packets use `data_bytes`, everything else
/// (HELLO, DA, RREQ, RREP, RERR) `control_bytes`.
std::uint32_t packet_bytes(const Packet& p, std::uint32_t control_bytes,
                           std::uint32_t data_bytes);

/// Single-line rendering used by the trace log. Fields appear in the
/// documented message order, e.g.
///   RREQ src=3 sprec=1,0 seq=2 bid=7 hops=1 dst=0 maxE=4.93
std::string describe(const Packet& p);

}  // namespace mwsn::routing
