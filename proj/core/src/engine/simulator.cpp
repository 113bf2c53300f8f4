#include "mwsn/engine/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <variant>

#include "mwsn/clustering/clustering.hpp"
#include "mwsn/engine/event_queue.hpp"
#include "mwsn/engine/rng.hpp"
#include "mwsn/engine/trace.hpp"
#include "mwsn/metrics/metrics.hpp"
#include "mwsn/mobility/mobility.hpp"
#include "mwsn/phy/energy.hpp"
#include "mwsn/phy/mac.hpp"
#include "mwsn/phy/radio.hpp"
#include "mwsn/routing/drain.hpp"

namespace mwsn {

namespace {

using routing::Audience;
using routing::Packet;

struct EvMac { phy::MacTimer timer; };
struct EvAgent { routing::AgentTimer timer; };
struct EvSend {
  NodeId from;
  Packet packet;
  std::optional<NodeId> to;
  Audience audience;
};
struct EvMobility {};
struct EvMetrics {};
struct EvHello { NodeId node; };
struct EvElection {};
struct EvDrain {};
struct EvTraffic {};
struct EvSense { std::size_t precinct; };
struct EvReading { NodeId node; };
struct EvKill { NodeId node; };
struct EvProbe { std::size_t index; };

using Event = std::variant<EvMac, EvAgent, EvSend, EvMobility, EvMetrics, EvHello, EvElection,
                           EvDrain, EvTraffic, EvSense, EvReading, EvKill, EvProbe>;

enum class Fate : std::uint8_t { Pending, Delivered, Dropped };

struct Node {
  mobility::MotionState motion;
  phy::EnergyLedger ledger;
  double idle_until = 0.0;
  std::optional<double> death_time;
  bool down = false;  // dead or failed; never comes back
  routing::DrainState drain;
  double consumed_at_sample = 0.0;
  double p_fusion = 0.0;
  bool retired = false;
  PrecinctCoord precinct;
  bool head = false;
  bool gateway = false;
};

struct InFlight {
  Packet packet;
  Audience audience = Audience::All;
};

class Simulator final : public phy::MacHost, public routing::RoutingHost {
 public:
  Simulator(const ScenarioConfig& config, const ScenarioScript& script, const SimOptions& options);
  RunResult run();

  // phy::MacHost
  void schedule_mac(double at, phy::MacTimer timer) override;
  bool alive(NodeId node) override { return !nodes_[node].down; }
  bool in_range(NodeId a, NodeId b) override {
    return phy::in_range(positions_[a], positions_[b], link_);
  }
  void neighbors(NodeId node, std::vector<NodeId>& out) override;
  void on_tx_start(const phy::Frame& frame, std::span<const NodeId> listeners) override;
  void on_receive(const phy::Frame& frame, NodeId receiver, phy::RxOutcome outcome) override;
  void on_unicast_result(const phy::Frame& frame, bool success) override;
  void on_broadcast_done(const phy::Frame& frame) override { frames_.erase(frame.id); }
  void on_frame_dropped(const phy::Frame& frame) override;

  // routing::RoutingHost
  double now() const override { return queue_.now(); }
  routing::NodeStatus status(NodeId node) const override;
  std::optional<NodeId> fusion_head_of(NodeId node) const override;
  PacketId next_packet_id() override { return next_packet_id_++; }
  double flood_jitter() override;
  void send(NodeId from, Packet packet, std::optional<NodeId> to, Audience audience,
            double delay) override;
  void set_timer(double delay, const routing::AgentTimer& timer) override;
  void delivered(const routing::DataPacket& packet) override;
  void dropped(std::span<const PacketId> originals, routing::DropReason reason) override;
  void route_mutation(const routing::RouteMutation& m) override;
  void flood_started(NodeId origin, NodeId destination) override;
  void rreq_answered(NodeId destination, const routing::RreqMessage& rreq) override;

 private:
  bool is_alive(NodeId n) const { return !nodes_[n].down; }
  double surplus_now(NodeId n) const;
  void accrue_idle(NodeId n, double t);
  void charge_radio(NodeId n, phy::Direction dir, std::uint32_t bits, double dist);
  void charge(NodeId n, phy::EnergyCategory category, double joules);
  void handle_death(NodeId n, std::optional<double> energy_death);

  void dispatch(Event& e);
  void schedule_periodic(double period, Event e);
  void mobility_tick();
  void update_membership();
  std::vector<clustering::CandidateScore> score(const clustering::Precinct& p);
  void set_head(clustering::Precinct& p, NodeId head);
  void elect_missing_heads();
  void election_check();
  void refresh_roles();
  void drain_sample();
  void traffic_period();
  void sense(NodeId n);
  void send_hello(NodeId n);
  void enqueue_frame(NodeId from, Packet packet, std::optional<NodeId> to, Audience audience);
  bool addressed(NodeId receiver, const InFlight& f, NodeId sender) const;
  void lose(const Packet& packet, routing::DropReason reason);
  metrics::RunReport build_report(double end_time) const;

  ScenarioConfig cfg_;
  ScenarioScript script_;
  SimOptions options_;
  mobility::WaypointParams waypoint_;
  phy::LinkModel link_;
  phy::RadioEnergyParams radio_;
  clustering::PrecinctGrid grid_;
  clustering::Thresholds thresholds_;

  EventQueue<Event> queue_;
  std::vector<Node> nodes_;
  std::vector<Vec2> positions_;
  std::vector<Vec2> prev_positions_;
  std::vector<Rng> mobility_rngs_;
  Rng traffic_rng_;
  Rng routing_rng_;
  Rng hello_rng_;
  phy::Mac mac_;
  std::vector<std::unique_ptr<routing::RoutingAgent>> agents_;

  std::unordered_map<phy::FrameId, InFlight> frames_;
  phy::FrameId next_frame_id_ = 1;
  PacketId next_packet_id_ = 1;

  std::vector<Fate> fates_;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t floods_ = 0;
  std::uint64_t head_changes_ = 0;
  std::size_t alive_count_ = 0;
  double last_mobility_ = 0.0;

  TraceLog trace_;
  RunAudit audit_;
};

const ScenarioConfig& checked(const ScenarioConfig& c) {
  validate(c);
  return c;
}

phy::MacParams mac_params(const ScenarioConfig& c) {
  return {c.mac_slot, c.mac_max_retries, c.mac_backoff_slots, c.mac_cw_max, c.channel_rate_bps};
}

Simulator::Simulator(const ScenarioConfig& config, const ScenarioScript& script,
                     const SimOptions& options)
    : cfg_(checked(config)),
      script_(script),
      options_(options),
      grid_(config.field_side, config.precinct_grid_dim),
      traffic_rng_(Rng::fork(config.rng_seed, "traffic")),
      routing_rng_(Rng::fork(config.rng_seed, "routing")),
      hello_rng_(Rng::fork(config.rng_seed, "hello")),
      mac_(config.node_count, mac_params(config), *this, Rng::fork(config.rng_seed, "mac")),
      trace_(options.trace) {
  const auto n = cfg_.node_count;
  if (!script_.positions.empty() && script_.positions.size() != n) {
    throw ConfigError("script positions must list every node", "node_count");
  }
  if (!script_.initial_energy.empty() && script_.initial_energy.size() != n) {
    throw ConfigError("script energies must list every node", "node_count");
  }

  waypoint_ = {cfg_.field_side, cfg_.pause_time, cfg_.speed_min, cfg_.speed_max};
  link_ = {cfg_.effective_link_range(), cfg_.path_loss_alpha};
  radio_.e_elec = cfg_.e_elec;
  radio_.e_amp = cfg_.e_amp;
  radio_.path_loss_alpha = cfg_.path_loss_alpha;
  radio_.duration_mode = cfg_.energy_charging == ChargingMode::Duration;
  radio_.tx_power_watts = cfg_.tx_power_watts;
  radio_.rx_power_watts = cfg_.rx_power_watts;
  radio_.channel_rate_bps = cfg_.channel_rate_bps;
  thresholds_ = {cfg_.e_threshold, cfg_.effective_r_threshold(), cfg_.effective_m_threshold()};

  nodes_.resize(n);
  positions_.resize(n);
  mobility_rngs_.reserve(n);
  for (NodeId i = 0; i < n; ++i) {
    mobility_rngs_.push_back(Rng::fork(cfg_.rng_seed, "mobility/" + std::to_string(i)));
    auto& node = nodes_[i];
    node.motion = mobility::initial_state(waypoint_, mobility_rngs_.back());
    if (!script_.positions.empty()) node.motion.position = script_.positions[i];
    if (cfg_.sink_fixed && i == cfg_.sink_node && script_.positions.empty()) {
      node.motion.position = {cfg_.field_side / 2, cfg_.field_side / 2};
    }
    const double e0 = script_.initial_energy.empty() ? cfg_.initial_energy
                                                     : script_.initial_energy[i];
    node.ledger = phy::EnergyLedger(e0);
    node.drain.ewma_alpha = cfg_.drain_ewma_alpha;
    positions_[i] = node.motion.position;
  }
  prev_positions_ = positions_;
  alive_count_ = n;

  const auto params = routing::routing_params(cfg_);
  agents_.reserve(n);
  for (NodeId i = 0; i < n; ++i) agents_.push_back(routing::make_agent(cfg_.protocol, i, *this, params));
}

// ---- energy -------------------------------------------------------------

double Simulator::surplus_now(NodeId n) const {
  const auto& node = nodes_[n];
  if (node.down || !script_.idle_drain) return node.ledger.surplus();
  const double pending = cfg_.e_s * std::max(0.0, now() - node.idle_until);
  return std::max(0.0, node.ledger.surplus() - pending);
}

void Simulator::accrue_idle(NodeId n, double t) {
  auto& node = nodes_[n];
  if (node.down || !script_.idle_drain) {
    node.idle_until = std::max(node.idle_until, t);
    return;
  }
  const double dt = t - node.idle_until;
  if (dt <= 0.0) return;
  const double surplus = node.ledger.surplus();
  const double cost = cfg_.e_s * dt;
  const double start = node.idle_until;
  node.idle_until = t;
  if (node.ledger.charge(phy::EnergyCategory::Idle, cost)) {
    handle_death(n, start + surplus / cfg_.e_s);
  }
}

void Simulator::charge_radio(NodeId n, phy::Direction dir, std::uint32_t bits, double dist) {
  accrue_idle(n, now());
  if (nodes_[n].down) return;
  if (phy::charge_packet(nodes_[n].ledger, dir, bits, dist, radio_)) handle_death(n, now());
}

void Simulator::charge(NodeId n, phy::EnergyCategory category, double joules) {
  accrue_idle(n, now());
  if (nodes_[n].down) return;
  if (nodes_[n].ledger.charge(category, joules)) handle_death(n, now());
}

void Simulator::handle_death(NodeId n, std::optional<double> energy_death) {
  auto& node = nodes_[n];
  if (node.down) return;
  node.down = true;
  node.death_time = energy_death;
  node.head = false;
  --alive_count_;
  trace_.line(now(), n, energy_death ? "DEATH" : "FAIL", "");
  // The MAC drops this node's queue at its next timer.
  agents_[n]->shutdown();
}

// ---- MAC host ---------------------------------------------------------------

void Simulator::schedule_mac(double at, phy::MacTimer timer) {
  queue_.schedule(std::max(at, now()), EvMac{timer});
}

void Simulator::neighbors(NodeId node, std::vector<NodeId>& out) {
  for (NodeId j = 0; j < nodes_.size(); ++j) {
    if (j != node && !nodes_[j].down && in_range(node, j)) out.push_back(j);
  }
}

bool Simulator::addressed(NodeId receiver, const InFlight& f, NodeId sender) const {
  switch (f.audience) {
    case Audience::All:
      return true;
    case Audience::Precinct:
      return nodes_[receiver].precinct == nodes_[sender].precinct;
    case Audience::Backbone: {
      const auto& r = nodes_[receiver];
      if (r.head || r.gateway) return true;
      const auto* rreq = std::get_if<routing::RreqMessage>(&f.packet);
      return rreq && rreq->destination_address == receiver;
    }
  }
  return false;
}

void Simulator::on_tx_start(const phy::Frame& frame, std::span<const NodeId> listeners) {
  const auto it = frames_.find(frame.id);
  if (it == frames_.end()) return;
  const NodeId s = frame.sender;
  double dist = 0.0;
  if (frame.dest) {
    dist = distance(positions_[s], positions_[*frame.dest]);
  } else {
    for (NodeId r : listeners) {
      if (addressed(r, it->second, s)) dist = std::max(dist, distance(positions_[s], positions_[r]));
    }
  }
  if (trace_.enabled()) {
    trace_.line(now(), s, frame.dest ? "TX" : "BCAST",
                (frame.dest ? "to=" + std::to_string(*frame.dest) + " " : std::string()) +
                    routing::describe(it->second.packet));
  }
  charge_radio(s, phy::Direction::Tx, frame.bits, dist);
}

void Simulator::on_receive(const phy::Frame& frame, NodeId r, phy::RxOutcome outcome) {
  const auto it = frames_.find(frame.id);
  if (it == frames_.end()) return;
  if (!frame.dest && !addressed(r, it->second, frame.sender)) return;
  charge_radio(r, phy::Direction::Rx, frame.bits, 0.0);
  if (outcome != phy::RxOutcome::Delivered) {
    trace_.line(now(), r, "COLLIDE", "from=" + std::to_string(frame.sender));
    return;
  }
  if (nodes_[r].down) {
    // The battery gave out while receiving: the frame is gone.
    if (frame.dest) lose(it->second.packet, routing::DropReason::NodeDeath);
    return;
  }
  const Packet packet = it->second.packet;
  if (std::holds_alternative<routing::HelloPacket>(packet)) return;
  if (trace_.enabled()) {
    trace_.line(now(), r, "RX", "from=" + std::to_string(frame.sender) + " " + routing::describe(packet));
  }
  agents_[r]->receive(packet, frame.sender);
}

void Simulator::on_unicast_result(const phy::Frame& frame, bool success) {
  auto node = frames_.extract(frame.id);
  if (node.empty() || success) return;
  trace_.line(now(), frame.sender, "LINKFAIL", "to=" + std::to_string(*frame.dest));
  if (is_alive(frame.sender)) {
    agents_[frame.sender]->link_failed(node.mapped().packet, *frame.dest);
  } else {
    lose(node.mapped().packet, routing::DropReason::NodeDeath);
  }
}

void Simulator::on_frame_dropped(const phy::Frame& frame) {
  auto node = frames_.extract(frame.id);
  if (!node.empty()) lose(node.mapped().packet, routing::DropReason::NodeDeath);
}

void Simulator::lose(const Packet& packet, routing::DropReason reason) {
  if (const auto* d = std::get_if<routing::DataPacket>(&packet)) {
    dropped(d->originals, reason);
  } else if (const auto* da = std::get_if<routing::DaPacket>(&packet)) {
    dropped(std::span<const PacketId>(&da->reading, 1), reason);
  }
}

// ---- routing host -----------------------------------------------------------

routing::NodeStatus Simulator::status(NodeId n) const {
  const auto& node = nodes_[n];
  routing::NodeStatus s;
  s.alive = !node.down;
  s.surplus = surplus_now(n);
  s.lifetime = node.drain.lifetime_estimate;
  const auto pop = std::max<std::size_t>(1, grid_.at(node.precinct).members.size());
  s.vid = clustering::compute_vid(s.surplus, pop, node.retired);
  s.head = node.head;
  s.gateway = node.gateway;
  s.precinct = node.precinct;
  return s;
}

std::optional<NodeId> Simulator::fusion_head_of(NodeId n) const {
  return grid_.at(nodes_[n].precinct).fusion_head;
}

double Simulator::flood_jitter() {
  return cfg_.flood_jitter > 0.0 ? routing_rng_.uniform(0.0, cfg_.flood_jitter) : 0.0;
}

void Simulator::send(NodeId from, Packet packet, std::optional<NodeId> to, Audience audience,
                     double delay) {
  if (delay > 0.0) {
    queue_.schedule(now() + delay, EvSend{from, std::move(packet), to, audience});
  } else {
    enqueue_frame(from, std::move(packet), to, audience);
  }
}

void Simulator::enqueue_frame(NodeId from, Packet packet, std::optional<NodeId> to,
                              Audience audience) {
  if (!is_alive(from)) {
    lose(packet, routing::DropReason::NodeDeath);
    return;
  }
  const auto bits =
      8 * routing::packet_bytes(packet, cfg_.control_packet_bytes, cfg_.data_packet_bytes);
  const auto id = next_frame_id_++;
  frames_.emplace(id, InFlight{std::move(packet), audience});
  mac_.enqueue(phy::Frame{id, from, to, bits, 0}, now());
}

void Simulator::set_timer(double delay, const routing::AgentTimer& timer) {
  queue_.schedule(now() + delay, EvAgent{timer});
}

void Simulator::delivered(const routing::DataPacket& packet) {
  for (PacketId o : packet.originals) {
    if (o < fates_.size() && fates_[o] == Fate::Pending) {
      fates_[o] = Fate::Delivered;
      ++delivered_;
    }
  }
  if (trace_.enabled()) trace_.line(now(), packet.destination, "DELIVER", routing::describe(packet));
  if (options_.audit) audit_.delivered_paths.push_back(packet.path);
}

void Simulator::dropped(std::span<const PacketId> originals, routing::DropReason reason) {
  for (PacketId o : originals) {
    if (o < fates_.size() && fates_[o] == Fate::Pending) {
      fates_[o] = Fate::Dropped;
      ++dropped_;
    }
  }
  if (reason == routing::DropReason::Loop) ++audit_.loop_drops;
  if (trace_.enabled()) {
    std::string ids;
    for (PacketId o : originals) ids += (ids.empty() ? "" : ",") + std::to_string(o);
    trace_.line(now(), kNoNode, "DROP", std::string(routing::to_string(reason)) + " readings=" + ids);
  }
}

void Simulator::route_mutation(const routing::RouteMutation& m) {
  if (options_.audit) audit_.mutations.push_back(m);
}

void Simulator::flood_started(NodeId origin, NodeId destination) {
  ++floods_;
  if (options_.audit) {
    audit_.floods.push_back({now(), origin, destination, agents_[origin]->route_count(destination)});
  }
}

void Simulator::rreq_answered(NodeId destination, const routing::RreqMessage& rreq) {
  if (options_.audit) audit_.answered.push_back({now(), destination, rreq});
}

// ---- clustering -------------------------------------------------------------

std::vector<clustering::CandidateScore> Simulator::score(const clustering::Precinct& p) {
  const auto& members = p.members;
  std::vector<Vec2> cur, prev;
  cur.reserve(members.size());
  prev.reserve(members.size());
  for (NodeId m : members) {
    cur.push_back(positions_[m]);
    prev.push_back(prev_positions_[m]);
  }
  std::vector<clustering::CandidateScore> scores;
  scores.reserve(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    const NodeId m = members[k];
    clustering::CandidateScore s;
    s.node = m;
    s.surplus = surplus_now(m);
    s.vid = clustering::compute_vid(s.surplus, members.size(), nodes_[m].retired);
    s.tx_range = link_.max_range;
    s.mobility = mobility::relative_mobility(k, cur, prev, cfg_.mobility_tick).value;
    scores.push_back(s);
  }
  clustering::score_precinct(scores, thresholds_);
  for (const auto& s : scores) nodes_[s.node].p_fusion = s.p_fusion;
  return scores;
}

void Simulator::set_head(clustering::Precinct& p, NodeId head) {
  if (p.fusion_head == head) return;
  if (p.fusion_head) ++head_changes_;
  p.fusion_head = head;
  nodes_[head].retired = false;
  trace_.line(now(), head, "HEAD",
              "precinct=" + std::to_string(p.coord.row) + "," + std::to_string(p.coord.col));
}

void Simulator::elect_missing_heads() {
  for (auto& p : grid_.precincts()) {
    if (p.members.empty() || p.fusion_head) continue;
    const auto scores = score(p);
    set_head(p, clustering::elect_fusion_head(scores));
  }
}

void Simulator::refresh_roles() {
  for (auto& node : nodes_) {
    node.head = false;
    node.gateway = false;
  }
  for (const auto& p : grid_.precincts()) {
    if (p.fusion_head) nodes_[*p.fusion_head].head = true;
    for (NodeId g : p.gateways) nodes_[g].gateway = true;
  }
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (is_alive(i)) agents_[i]->cluster_changed();
  }
}

void Simulator::update_membership() {
  std::vector<bool> alive(nodes_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) alive[i] = is_alive(i);
  grid_.assign_members(positions_, alive);
  clustering::identify_gateways(grid_, positions_, link_);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (alive[i]) nodes_[i].precinct = grid_.locate(positions_[i]);
  }
  elect_missing_heads();
  refresh_roles();
}

void Simulator::election_check() {
  for (auto& p : grid_.precincts()) {
    if (p.members.empty()) continue;
    const auto scores = score(p);
    if (!p.fusion_head) {
      set_head(p, clustering::elect_fusion_head(scores));
      continue;
    }
    const NodeId old = *p.fusion_head;
    const auto r = clustering::reelection_check(old, scores, cfg_.p_threshold);
    if (!r.new_head) continue;
    if (r.head_retired) nodes_[old].retired = true;
    set_head(p, *r.new_head);
  }
  refresh_roles();
}

void Simulator::send_hello(NodeId n) {
  const auto s = status(n);
  routing::HelloPacket hello{n, s.surplus, nodes_[n].p_fusion, s.vid};
  enqueue_frame(n, hello, std::nullopt, Audience::Precinct);
}

// ---- periodic processes -----------------------------------------------------

void Simulator::mobility_tick() {
  const double t = now();
  const double dt = t - last_mobility_;
  prev_positions_ = positions_;
  if (dt > 0.0 && !script_.static_nodes) {
    for (NodeId i = 0; i < nodes_.size(); ++i) {
      if (!is_alive(i) || (cfg_.sink_fixed && i == cfg_.sink_node)) continue;
      auto& node = nodes_[i];
      node.motion = mobility::step_motion(node.motion, last_mobility_, dt, waypoint_,
                                          mobility_rngs_[i]);
      positions_[i] = node.motion.position;
    }
  }
  last_mobility_ = t;
  update_membership();
}

void Simulator::drain_sample() {
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    accrue_idle(i, now());
    if (!is_alive(i)) continue;
    auto& node = nodes_[i];
    const double consumed = node.ledger.consumed_total();
    node.drain = routing::update_drain_rate(node.drain, consumed - node.consumed_at_sample,
                                            cfg_.drain_sample_period, node.ledger.surplus());
    node.consumed_at_sample = consumed;
  }
}

void Simulator::traffic_period() {
  const double t = now();
  for (std::uint32_t k = 0; k < cfg_.events_per_period; ++k) {
    const double at = t + traffic_rng_.uniform(0.0, cfg_.traffic_period);
    const auto precinct =
        static_cast<std::size_t>(traffic_rng_.uniform_int(0, grid_.size() - 1));
    if (at <= cfg_.sim_duration) queue_.schedule(at, EvSense{precinct});
  }
}

void Simulator::sense(NodeId n) {
  if (!is_alive(n) || n == cfg_.sink_node) return;
  const PacketId reading = fates_.size();
  fates_.push_back(Fate::Pending);
  const double bits = 8.0 * cfg_.data_packet_bytes;
  charge(n, phy::EnergyCategory::Sense, cfg_.e_g * bits / cfg_.data_rate_bps);
  if (!is_alive(n)) {
    dropped(std::span<const PacketId>(&reading, 1), routing::DropReason::NodeDeath);
    return;
  }
  trace_.line(now(), n, "SENSE", "reading=" + std::to_string(reading));
  agents_[n]->originate(reading, cfg_.sink_node);
}

void Simulator::schedule_periodic(double period, Event e) {
  const double next = now() + period;
  if (next <= cfg_.sim_duration) queue_.schedule(next, std::move(e));
}

void Simulator::dispatch(Event& ev) {
  std::visit(
      [&](auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, EvMac>) {
          mac_.handle(e.timer, now());
        } else if constexpr (std::is_same_v<T, EvAgent>) {
          if (is_alive(e.timer.node)) agents_[e.timer.node]->timer(e.timer);
        } else if constexpr (std::is_same_v<T, EvSend>) {
          enqueue_frame(e.from, std::move(e.packet), e.to, e.audience);
        } else if constexpr (std::is_same_v<T, EvMobility>) {
          mobility_tick();
          schedule_periodic(cfg_.mobility_tick, EvMobility{});
        } else if constexpr (std::is_same_v<T, EvMetrics>) {
          for (NodeId i = 0; i < nodes_.size(); ++i) accrue_idle(i, now());
          for (NodeId i = 0; i < nodes_.size(); ++i) {
            if (is_alive(i)) agents_[i]->tick();
          }
          schedule_periodic(cfg_.metrics_tick, EvMetrics{});
        } else if constexpr (std::is_same_v<T, EvHello>) {
          if (!is_alive(e.node)) return;
          send_hello(e.node);
          schedule_periodic(cfg_.hello_period, EvHello{e.node});
        } else if constexpr (std::is_same_v<T, EvElection>) {
          election_check();
          schedule_periodic(cfg_.election_check_period, EvElection{});
        } else if constexpr (std::is_same_v<T, EvDrain>) {
          drain_sample();
          schedule_periodic(cfg_.drain_sample_period, EvDrain{});
        } else if constexpr (std::is_same_v<T, EvTraffic>) {
          traffic_period();
          schedule_periodic(cfg_.traffic_period, EvTraffic{});
        } else if constexpr (std::is_same_v<T, EvSense>) {
          const auto members = grid_.precincts()[e.precinct].members;
          for (NodeId m : members) sense(m);
        } else if constexpr (std::is_same_v<T, EvReading>) {
          sense(e.node);
        } else if constexpr (std::is_same_v<T, EvKill>) {
          accrue_idle(e.node, now());
          handle_death(e.node, std::nullopt);
        } else if constexpr (std::is_same_v<T, EvProbe>) {
          const auto& p = script_.probes[e.index];
          const auto& agent = *agents_[p.node];
          audit_.probes.push_back(
              {now(), p.node, p.destination, agent.route_count(p.destination),
               agent.current_next_hop(p.destination)});
        }
      },
      ev);
}

RunResult Simulator::run() {
  update_membership();
  for (NodeId i = 0; i < nodes_.size(); ++i) nodes_[i].idle_until = 0.0;

  const auto at = [&](double t, Event e) {
    if (t <= cfg_.sim_duration) queue_.schedule(t, std::move(e));
  };
  at(cfg_.mobility_tick, EvMobility{});
  at(cfg_.metrics_tick, EvMetrics{});
  at(cfg_.election_check_period, EvElection{});
  at(cfg_.drain_sample_period, EvDrain{});
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    // Each node keeps a fixed random phase so HELLOs do not all collide.
    at(hello_rng_.uniform(0.0, cfg_.hello_period), EvHello{i});
  }
  if (script_.random_traffic) at(0.0, EvTraffic{});
  for (const auto& r : script_.readings) at(r.time, EvReading{r.node});
  for (const auto& k : script_.kills) at(k.time, EvKill{k.node});
  for (std::size_t i = 0; i < script_.probes.size(); ++i) at(script_.probes[i].time, EvProbe{i});

  while (!queue_.empty() && alive_count_ > 0) {
    if (*queue_.next_time() > cfg_.sim_duration) break;
    auto entry = queue_.pop();
    dispatch(entry.payload);
  }
  const double end = alive_count_ == 0 ? now() : cfg_.sim_duration;
  if (alive_count_ > 0) {
    for (NodeId i = 0; i < nodes_.size(); ++i) accrue_idle(i, end);
  }

  RunResult result;
  result.report = build_report(end);
  result.trace = trace_.str();
  result.audit = std::move(audit_);
  return result;
}

metrics::RunReport Simulator::build_report(double end_time) const {
  metrics::RunReport r;
  r.seed = cfg_.rng_seed;
  r.protocol = cfg_.protocol;
  r.end_time = end_time;
  r.packets_generated = fates_.size();
  r.packets_delivered = delivered_;
  r.packets_dropped = dropped_;
  r.packets_in_flight = r.packets_generated - delivered_ - dropped_;
  r.pdf = metrics::compute_pdf(delivered_, r.packets_generated);

  std::vector<std::optional<double>> deaths;
  deaths.reserve(nodes_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    const auto& node = nodes_[i];
    const auto& l = node.ledger;
    metrics::NodeReport nr;
    nr.id = i;
    nr.initial_energy = l.initial();
    nr.surplus_final = l.surplus();
    nr.consumed_tx = l.consumed(phy::EnergyCategory::Tx);
    nr.consumed_rx = l.consumed(phy::EnergyCategory::Rx);
    nr.consumed_sense = l.consumed(phy::EnergyCategory::Sense);
    nr.consumed_idle = l.consumed(phy::EnergyCategory::Idle);
    nr.death_time = node.death_time;
    r.per_node.push_back(nr);
    deaths.push_back(node.death_time);
  }
  const auto life = metrics::compute_network_lifetime(deaths, cfg_.sim_duration);
  r.network_lifetime = life.value;
  r.lifetime_censored = life.censored;

  r.rreq_floods = floods_;
  r.mac_transmissions = mac_.transmissions();
  r.mac_collisions = mac_.collisions();
  r.head_changes = head_changes_;
  r.config = cfg_;
  return r;
}

}  // namespace

RunResult simulate(const ScenarioConfig& config, const ScenarioScript& script,
                   const SimOptions& options) {
  Simulator sim(config, script, options);
  return sim.run();
}

metrics::RunReport run(const ScenarioConfig& config) { return simulate(config).report; }

}  // namespace mwsn
