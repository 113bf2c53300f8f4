#include "mwsn/routing/route_table.hpp"

#include <algorithm>

namespace mwsn::routing {

namespace {

bool higher_surplus(const RoutePath& a, const RoutePath& b) {
  if (a.max_surplus_energy != b.max_surplus_energy) {
    return a.max_surplus_energy > b.max_surplus_energy;
  }
  if (a.hop_count != b.hop_count) return a.hop_count < b.hop_count;
  return a.next_hop < b.next_hop;
}

}  // namespace

OfferResult RouteTableEntry::offer(std::uint32_t sequence, const RoutePath& path,
                                   std::uint32_t upstream_advertised, std::size_t max_paths) {
  if (!established) {
    established = true;
    sequence_number = sequence;
    advertised_hop_count = path.hop_count;
    route_list = {path};
    return OfferResult::Created;
  }
  if (sequence < sequence_number) return OfferResult::Stale;
  if (sequence > sequence_number) {
    sequence_number = sequence;
    advertised_hop_count = path.hop_count;
    route_list = {path};
    return OfferResult::NewSequence;
  }
  if (upstream_advertised >= advertised_hop_count) return OfferResult::HopRejected;

  auto result = OfferResult::Added;
  const auto same = std::find_if(route_list.begin(), route_list.end(),
                                 [&](const RoutePath& r) { return r.next_hop == path.next_hop; });
  if (same != route_list.end()) {
    *same = path;
    result = OfferResult::Updated;
  } else {
    route_list.push_back(path);
  }
  std::stable_sort(route_list.begin(), route_list.end(), higher_surplus);
  if (route_list.size() > max_paths) route_list.resize(max_paths);
  return result;
}

bool RouteTableEntry::prune(NodeId next_hop) {
  return std::erase_if(route_list, [&](const RoutePath& r) { return r.next_hop == next_hop; }) >
         0;
}

const RoutePath* RouteTableEntry::best() const {
  for (const auto& r : route_list) {
    if (r.readiness != Readiness::Discard) return &r;
  }
  return nullptr;
}

bool RouteTableEntry::sorted() const {
  return std::is_sorted(route_list.begin(), route_list.end(),
                        [](const RoutePath& a, const RoutePath& b) {
                          return a.max_surplus_energy > b.max_surplus_energy;
                        });
}

OfferResult MultipathTable::offer(NodeId destination, std::uint32_t sequence,
                                  const RoutePath& path, std::uint32_t upstream_advertised,
                                  std::size_t max_paths, double expires) {
  auto& e = entries_.try_emplace(destination).first->second;
  const auto r = e.offer(sequence, path, upstream_advertised, max_paths);
  e.destination = destination;
  if (accepted(r)) e.expiration_time = std::max(e.expiration_time, expires);
  return r;
}

RouteTableEntry* MultipathTable::find(NodeId destination) {
  const auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

const RouteTableEntry* MultipathTable::find(NodeId destination) const {
  const auto it = entries_.find(destination);
  return it == entries_.end() ? nullptr : &it->second;
}

const RoutePath* MultipathTable::lookup(NodeId destination, double now) const {
  const auto* e = find(destination);
  if (!e || now >= e->expiration_time) return nullptr;
  return e->best();
}

void MultipathTable::refresh(NodeId destination, double expires) {
  if (auto* e = find(destination)) e->expiration_time = std::max(e->expiration_time, expires);
}

bool MultipathTable::prune(NodeId destination, NodeId next_hop) {
  auto* e = find(destination);
  return e && e->prune(next_hop);
}

OfferResult SingleRouteTable::offer(NodeId destination, std::uint32_t sequence, NodeId next_hop,
                                    std::uint32_t hop_count, double expires) {
  const auto it = routes_.find(destination);
  const SingleRoute fresh{next_hop, hop_count, sequence, expires, true};
  if (it == routes_.end()) {
    routes_.emplace(destination, fresh);
    return OfferResult::Created;
  }
  auto& r = it->second;
  if (sequence < r.sequence_number) return OfferResult::Stale;
  if (sequence > r.sequence_number) {
    r = fresh;
    return OfferResult::NewSequence;
  }
  if (hop_count >= r.hop_count) return OfferResult::HopRejected;
  r = fresh;
  return OfferResult::Updated;
}

const SingleRoute* SingleRouteTable::lookup(NodeId destination, double now) const {
  const auto* r = find(destination);
  return r && r->valid && now < r->expiration_time ? r : nullptr;
}

const SingleRoute* SingleRouteTable::find(NodeId destination) const {
  const auto it = routes_.find(destination);
  return it == routes_.end() ? nullptr : &it->second;
}

void SingleRouteTable::refresh(NodeId destination, double expires) {
  const auto it = routes_.find(destination);
  if (it != routes_.end()) {
    it->second.expiration_time = std::max(it->second.expiration_time, expires);
  }
}

bool SingleRouteTable::invalidate(NodeId destination, NodeId next_hop) {
  const auto it = routes_.find(destination);
  if (it == routes_.end() || !it->second.valid || it->second.next_hop != next_hop) return false;
  it->second.valid = false;
  return true;
}

}  // namespace mwsn::routing
