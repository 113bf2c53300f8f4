#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mwsn/types.hpp"

namespace mwsn {

enum class Protocol { E2RP, AODV };
enum class ChargingMode { PerBit, Duration };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view text);

/// Raised for malformed scenario documents and for values that violate a
/// config invariant. `key()` names the offending key (empty when the error is
/// purely syntactic) and `line()` the 1-based source line (0 when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, std::string key = {}, int line = 0)
      : std::runtime_error(std::move(message)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Every scenario parameter. Defaults reproduce the reference experiment:
/// 100 nodes in a 25 m square for 500 s, random waypoint with 30 s pauses and
/// 5..20 m/s speeds, 5 J batteries and the first-order radio model.
struct ScenarioConfig {
  // Population and field.
  std::uint32_t node_count = 100;
  double field_side = 25.0;            // m
  double sim_duration = 500.0;         // s

  // Random waypoint.
  double pause_time = 30.0;            // s
  double speed_min = 5.0;              // m/s
  double speed_max = 20.0;             // m/s

  // Energy model.
  double initial_energy = 5.0;         // J
  double e_elec = 50e-9;               // J/bit
  double e_amp = 100e-12;              // J/bit/m^alpha
  double path_loss_alpha = 2.0;
  double tx_power_watts = 0.66;        // W
  double rx_power_watts = 0.395;       // W
  double e_g = 50e-3;                  // W while sensing/generating
  double e_s = 28.36e-3;               // W standby
  ChargingMode energy_charging = ChargingMode::PerBit;

  // Radio link budget.
  double radio_range = 250.0;          // m
  std::optional<double> rx_sensitivity_watts;  // derived from radio_range when unset
  double antenna_gain_dbi = 1.2;       // both ends
  double reflection_coeff_sq = 0.3;    // |Gamma|^2
  double carrier_freq_hz = 900e6;

  // Traffic and packet sizes.
  double data_rate_bps = 1000.0;       // sensing/generation rate
  std::uint32_t control_packet_bytes = 36;
  std::uint32_t data_packet_bytes = 64;
  double traffic_period = 10.0;        // s
  std::uint32_t events_per_period = 5;
  NodeId sink_node = 0;
  bool sink_fixed = true;

  Protocol protocol = Protocol::E2RP;
  std::uint64_t rng_seed = 1;

  // Timers.
  double mobility_tick = 1.0;          // s, also the mobility-metric delta
  double metrics_tick = 1.0;           // s
  double hello_period = 1.0;           // s
  double election_check_period = 5.0;  // s
  double drain_sample_period = 5.0;    // s, EWMA window T
  double drain_ewma_alpha = 0.3;

  // Fusion-head election.
  double e_threshold = 1.0;                 // J
  std::optional<double> r_threshold;        // m, default: precinct cell diagonal
  std::optional<double> m_threshold;        // m/s, default: (speed_min + speed_max) / 2
  double p_threshold = 0.5;
  std::uint32_t precinct_grid_dim = 5;
  double aggregation_ratio = 0.25;
  double aggregation_window = 0.1;     // s

  // Contention MAC.
  double mac_slot = 1e-3;              // s
  std::uint32_t mac_max_retries = 3;
  std::uint32_t mac_backoff_slots = 8; // initial contention window, slots 1..N
  std::uint32_t mac_cw_max = 256;      // contention window cap for unicast retries
  double channel_rate_bps = 2e6;

  // Routing.
  double flood_jitter = 0.01;          // s
  double route_expiry = 10.0;          // s
  double flood_state_ttl = 2.0;        // s
  std::uint32_t max_paths = 3;
  double discovery_timeout = 1.0;      // s
  std::uint32_t discovery_retries = 2;
  double buffer_ttl = 5.0;             // s
  std::uint32_t data_ttl_hops = 32;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;

  double cell_side() const { return field_side / precinct_grid_dim; }
  double effective_r_threshold() const;
  double effective_m_threshold() const;
  double effective_rx_sensitivity() const;
  /// Friis range implied by the link budget.
  double effective_link_range() const;
};

/// Parses the flat `key = value` scenario grammar. Unset keys keep defaults.
/// Throws ConfigError on syntax errors, unknown keys and invariant violations.
ScenarioConfig parse_config(std::string_view source);

/// Loads and parses a scenario file; I/O failures raise ConfigError too.
ScenarioConfig load_config(const std::string& path);

/// Emits every key in the grammar accepted by parse_config. Doubles use the
/// shortest representation that round-trips exactly.
std::string serialize_config(const ScenarioConfig& config);

/// Throws ConfigError naming the key whose invariant is violated.
void validate(const ScenarioConfig& config);

}  // namespace mwsn
