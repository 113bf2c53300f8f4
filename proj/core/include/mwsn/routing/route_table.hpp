#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mwsn/routing/messages.hpp"
#include "mwsn/types.hpp"

namespace mwsn::routing {

struct RoutePath {
  NodeId next_hop = kNoNode;
  std::uint32_t hop_count = 0;
  Readiness readiness = Readiness::High;
  double max_surplus_energy = 0.0;
  double lifetime = kInfinity;
};

enum class OfferResult : std::uint8_t {
  Created,       // first route for this destination
  NewSequence,   // fresher sequence number, list reset
  Added,         // alternate path at the same sequence number
  Updated,       // same next hop, attributes refreshed
  Stale,         // older sequence number
  HopRejected,   // same sequence, upstream hop count not lower
};

inline bool accepted(OfferResult r) {
  return r == OfferResult::Created || r == OfferResult::NewSequence ||
         r == OfferResult::Added || r == OfferResult::Updated;
}

/// Multipath entry for one destination.
///
/// At a given sequence number the advertised hop count is frozen at the hop
/// count of the first accepted path, and an alternate is admitted only when
/// the upstream node's advertised hop count is strictly lower than ours. That
/// makes advertised hop counts strictly decrease along every next-hop chain.
/// Paths are kept sorted by max_surplus_energy, highest first, and the list
/// is capped at max_paths (the lowest-surplus path falls off).
struct RouteTableEntry {
  NodeId destination = kNoNode;
  std::uint32_t sequence_number = 0;
  std::uint32_t advertised_hop_count = 0;
  std::vector<RoutePath> route_list;
  double expiration_time = 0.0;
  bool established = false;  // false until the first offer

  /// `upstream_advertised` is the hop count field of the RREP as sent by
  /// path.next_hop; path.hop_count is normally upstream_advertised + 1.
  OfferResult offer(std::uint32_t sequence, const RoutePath& path,
                    std::uint32_t upstream_advertised, std::size_t max_paths);

  /// Removes the path through `next_hop`; true when one was removed.
  bool prune(NodeId next_hop);

  /// Highest-surplus path whose readiness is not Discard.
  const RoutePath* best() const;

  bool sorted() const;
};

class MultipathTable {
 public:
  /// Offers a path; a missing entry is created. Expiry is pushed to `expires`
  /// whenever the offer is accepted.
  OfferResult offer(NodeId destination, std::uint32_t sequence, const RoutePath& path,
                    std::uint32_t upstream_advertised, std::size_t max_paths, double expires);

  RouteTableEntry* find(NodeId destination);
  const RouteTableEntry* find(NodeId destination) const;

  /// Usable next hop for `destination` at time `now`, if any.
  const RoutePath* lookup(NodeId destination, double now) const;
  void refresh(NodeId destination, double expires);
  bool prune(NodeId destination, NodeId next_hop);

  const std::map<NodeId, RouteTableEntry>& entries() const { return entries_; }

 private:
  std::map<NodeId, RouteTableEntry> entries_;
};

/// Classic single-route table: one next hop per destination, replaced when a
/// fresher sequence number or, at the same sequence, a shorter path arrives.
struct SingleRoute {
  NodeId next_hop = kNoNode;
  std::uint32_t hop_count = 0;
  std::uint32_t sequence_number = 0;
  double expiration_time = 0.0;
  bool valid = false;
};

class SingleRouteTable {
 public:
  OfferResult offer(NodeId destination, std::uint32_t sequence, NodeId next_hop,
                    std::uint32_t hop_count, double expires);
  const SingleRoute* lookup(NodeId destination, double now) const;
  const SingleRoute* find(NodeId destination) const;
  void refresh(NodeId destination, double expires);
  /// Invalidates the route when it goes through `next_hop`.
  bool invalidate(NodeId destination, NodeId next_hop);

 private:
  std::map<NodeId, SingleRoute> routes_;
};

}  // namespace mwsn::routing
