#include "mwsn/phy/mac.hpp"

#include <algorithm>
#include <cmath>

namespace mwsn::phy {

namespace {

bool same_transmission(const Transmission& a, const Transmission& b) {
  return a.frame.id == b.frame.id && a.frame.sender == b.frame.sender && a.start == b.start;
}

bool overlaps(const Transmission& a, const Transmission& b) {
  return a.start < b.end && b.start < a.end;
}

}  // namespace

RxOutcome reception_outcome(const Transmission& tx, NodeId receiver,
                            std::span<const Transmission> medium,
                            const std::function<bool(NodeId, NodeId)>& in_range) {
  for (const auto& other : medium) {
    if (same_transmission(other, tx) || !overlaps(other, tx)) continue;
    if (other.frame.sender == receiver || in_range(other.frame.sender, receiver)) {
      return RxOutcome::Collided;
    }
  }
  return RxOutcome::Delivered;
}

Mac::Mac(std::size_t node_count, MacParams params, MacHost& host, Rng rng)
    : nodes_(node_count), params_(params), host_(host), rng_(std::move(rng)) {}

std::int64_t Mac::slot_index(double t) const {
  return static_cast<std::int64_t>(std::floor(t / params_.slot + 1e-9));
}

std::uint32_t Mac::contention_window(const Frame& frame) const {
  std::uint64_t cw = params_.backoff_slots;
  for (std::uint32_t i = 0; i < frame.retries && cw < params_.cw_max; ++i) cw *= 2;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(cw, params_.cw_max));
}

void Mac::schedule_attempt(NodeId node, double from_time, std::uint32_t cw) {
  auto& n = nodes_[node];
  n.active = true;
  const auto backoff = static_cast<std::int64_t>(rng_.uniform_int(1, cw));
  const double at = static_cast<double>(slot_index(from_time) + backoff) * params_.slot;
  host_.schedule_mac(at, MacTimer{MacTimerKind::Attempt, node, ++n.token});
}

void Mac::enqueue(Frame frame, double now) {
  auto& n = nodes_.at(frame.sender);
  const NodeId sender = frame.sender;
  n.queue.push_back(std::move(frame));
  if (!n.active) schedule_attempt(sender, now, contention_window(n.queue.front()));
}

void Mac::drop_node(NodeId node) {
  auto& n = nodes_.at(node);
  auto dropped = std::move(n.queue);
  n.queue.clear();
  n.active = false;
  ++n.token;
  for (const auto& f : dropped) host_.on_frame_dropped(f);
}

void Mac::handle(const MacTimer& timer, double now) {
  if (timer.kind == MacTimerKind::Attempt) {
    if (timer.token != nodes_.at(timer.node).token) return;  // stale
    attempt(timer.node, now);
  } else {
    finish(timer.token, now);
  }
}

void Mac::purge(double now) {
  // A transmission can only matter to one that ends at or after its start,
  // and nothing lasts longer than max_airtime_.
  const double horizon = now - 2.0 * max_airtime_ - params_.slot;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < medium_.size(); ++i) {
    if (medium_[i].end >= horizon) {
      if (keep != i) {
        medium_[keep] = std::move(medium_[i]);
        medium_tokens_[keep] = medium_tokens_[i];
      }
      ++keep;
    }
  }
  medium_.resize(keep);
  medium_tokens_.resize(keep);
}

void Mac::attempt(NodeId node, double now) {
  auto& n = nodes_[node];
  if (n.queue.empty()) {
    n.active = false;
    return;
  }
  if (!host_.alive(node)) {
    drop_node(node);
    return;
  }
  purge(now);

  // Carrier sense: transmissions that began strictly before this slot.
  double busy_until = -1.0;
  for (const auto& tx : medium_) {
    if (tx.start < now && tx.end > now &&
        (tx.frame.sender == node || host_.in_range(tx.frame.sender, node))) {
      busy_until = std::max(busy_until, tx.end);
    }
  }
  if (busy_until > now) {
    const auto next_slot = static_cast<double>(
        static_cast<std::int64_t>(std::ceil(busy_until / params_.slot - 1e-9)));
    schedule_attempt(node, next_slot * params_.slot, contention_window(n.queue.front()));
    return;
  }

  const Frame& frame = n.queue.front();
  Transmission tx;
  tx.frame = frame;
  tx.start = now;
  tx.end = now + airtime(frame.bits);
  scratch_.clear();
  host_.neighbors(node, scratch_);
  tx.listeners = scratch_;
  max_airtime_ = std::max(max_airtime_, tx.end - tx.start);
  ++transmissions_;

  const auto token = next_tx_token_++;
  const double end = tx.end;
  medium_.push_back(std::move(tx));
  medium_tokens_.push_back(token);
  host_.on_tx_start(medium_.back().frame, medium_.back().listeners);
  host_.schedule_mac(end, MacTimer{MacTimerKind::TxEnd, node, token});
}

void Mac::finish(std::uint64_t tx_token, double now) {
  const auto it = std::find(medium_tokens_.begin(), medium_tokens_.end(), tx_token);
  if (it == medium_tokens_.end()) return;
  const Transmission tx = medium_[static_cast<std::size_t>(it - medium_tokens_.begin())];
  const NodeId sender = tx.frame.sender;
  auto& n = nodes_[sender];

  const auto audible = [this](NodeId a, NodeId b) { return host_.in_range(a, b); };
  std::vector<std::pair<NodeId, RxOutcome>> outcomes;
  outcomes.reserve(tx.listeners.size());
  for (NodeId r : tx.listeners) {
    if (tx.frame.dest && *tx.frame.dest != r) continue;
    if (!host_.alive(r)) continue;
    const auto outcome = reception_outcome(tx, r, medium_, audible);
    if (outcome == RxOutcome::Collided) ++collisions_;
    outcomes.emplace_back(r, outcome);
  }

  // Settle MAC state before any callback can enqueue more frames.
  std::optional<bool> unicast_success;
  bool frame_done = true;
  if (tx.frame.dest) {
    const bool ok = !outcomes.empty() && outcomes.front().second == RxOutcome::Delivered;
    const bool sender_alive = host_.alive(sender);
    if (!ok && sender_alive && tx.frame.retries < params_.max_retries && !n.queue.empty()) {
      ++n.queue.front().retries;
      frame_done = false;
    } else {
      unicast_success = ok;
    }
  }
  if (frame_done && !n.queue.empty()) n.queue.pop_front();
  n.active = false;
  if (!host_.alive(sender)) {
    drop_node(sender);
  } else if (!n.queue.empty()) {
    schedule_attempt(sender, now, contention_window(n.queue.front()));
  }

  for (const auto& [r, outcome] : outcomes) host_.on_receive(tx.frame, r, outcome);
  if (unicast_success) host_.on_unicast_result(tx.frame, *unicast_success);
  if (!tx.frame.dest) host_.on_broadcast_done(tx.frame);
}

}  // namespace mwsn::phy
