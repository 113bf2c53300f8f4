#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mwsn/engine/rng.hpp"
#include "mwsn/types.hpp"

namespace mwsn::phy {

using FrameId = std::uint64_t;

enum class RxOutcome : std::uint8_t { Delivered, Collided };

struct Frame {
  FrameId id = 0;
  NodeId sender = kNoNode;
  std::optional<NodeId> dest;  // unset: broadcast
  std::uint32_t bits = 0;
  std::uint32_t retries = 0;
};

struct MacParams {
  double slot = 1e-3;
  std::uint32_t max_retries = 3;
  std::uint32_t backoff_slots = 8;
  std::uint32_t cw_max = 256;
  double channel_rate_bps = 2e6;
};

enum class MacTimerKind : std::uint8_t { Attempt, TxEnd };

struct MacTimer {
  MacTimerKind kind = MacTimerKind::Attempt;
  NodeId node = kNoNode;
  std::uint64_t token = 0;
};

/// What the MAC needs from the surrounding simulation.
class MacHost {
 public:
  virtual ~MacHost() = default;
  virtual void schedule_mac(double at, MacTimer timer) = 0;
  virtual bool alive(NodeId node) = 0;
  virtual bool in_range(NodeId a, NodeId b) = 0;
  /// Alive nodes within range of `node`, excluding itself.
  virtual void neighbors(NodeId node, std::vector<NodeId>& out) = 0;

  virtual void on_tx_start(const Frame& frame, std::span<const NodeId> listeners) = 0;
  virtual void on_receive(const Frame& frame, NodeId receiver, RxOutcome outcome) = 0;
  virtual void on_unicast_result(const Frame& frame, bool success) = 0;
  /// A broadcast frame finished and every listener has been served.
  virtual void on_broadcast_done(const Frame& /*frame*/) {}
  virtual void on_frame_dropped(const Frame& frame) = 0;
};

/// One transmission on the shared medium, [start, end).
struct Transmission {
  Frame frame;
  double start = 0.0;
  double end = 0.0;
  std::vector<NodeId> listeners;
};

/// Collision rule at one receiver: the reception fails when any other
/// transmission overlapping [tx.start, tx.end) is audible at the receiver, or
/// when the receiver was itself transmitting (half duplex).
RxOutcome reception_outcome(const Transmission& tx, NodeId receiver,
                            std::span<const Transmission> medium,
                            const std::function<bool(NodeId, NodeId)>& in_range);

/// Slotted contention MAC. Each node serves a FIFO of frames. A frame waits
/// a uniform backoff of 1..CW slots, defers while an earlier audible
/// transmission occupies the medium, then transmits for bits / rate seconds.
/// Transmissions starting in the same slot do not sense each other and collide
/// wherever both are audible. Unicast frames retry up to max_retries times
/// with a doubled contention window; broadcasts are sent once.
class Mac {
 public:
  Mac(std::size_t node_count, MacParams params, MacHost& host, Rng rng);

  void enqueue(Frame frame, double now);
  void handle(const MacTimer& timer, double now);
  /// Drops every queued frame of a dead node.
  void drop_node(NodeId node);

  std::size_t queued(NodeId node) const { return nodes_.at(node).queue.size(); }
  double airtime(std::uint32_t bits) const { return bits / params_.channel_rate_bps; }
  const MacParams& params() const { return params_; }

  std::uint64_t transmissions() const { return transmissions_; }
  std::uint64_t collisions() const { return collisions_; }

 private:
  struct NodeMac {
    std::deque<Frame> queue;
    bool active = false;  // an attempt or transmission is pending
    std::uint64_t token = 0;
  };

  std::int64_t slot_index(double t) const;
  std::uint32_t contention_window(const Frame& frame) const;
  void schedule_attempt(NodeId node, double from_time, std::uint32_t cw);
  void attempt(NodeId node, double now);
  void finish(std::uint64_t tx_token, double now);
  void purge(double now);

  std::vector<NodeMac> nodes_;
  MacParams params_;
  MacHost& host_;
  Rng rng_;
  std::vector<Transmission> medium_;
  std::vector<std::uint64_t> medium_tokens_;
  std::uint64_t next_tx_token_ = 1;
  double max_airtime_ = 0.0;
  std::uint64_t transmissions_ = 0;
  std::uint64_t collisions_ = 0;
  std::vector<NodeId> scratch_;
};

}  // namespace mwsn::phy
