#include "mwsn/engine/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "mwsn/phy/radio.hpp"

namespace mwsn {

std::string_view to_string(Protocol p) {
  return p == Protocol::E2RP ? "e2rp" : "aodv";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
  if (text == "e2rp" || text == "E2RP") return Protocol::E2RP;
  if (text == "aodv" || text == "AODV") return Protocol::AODV;
  return std::nullopt;
}

double ScenarioConfig::effective_r_threshold() const {
  return r_threshold.value_or(std::sqrt(2.0) * cell_side());
}

double ScenarioConfig::effective_m_threshold() const {
  return m_threshold.value_or(0.5 * (speed_min + speed_max));
}

double ScenarioConfig::effective_rx_sensitivity() const {
  if (rx_sensitivity_watts) return *rx_sensitivity_watts;
  return phy::rx_sensitivity_for_range(radio_range, tx_power_watts, antenna_gain_dbi,
                                       antenna_gain_dbi, reflection_coeff_sq,
                                       carrier_freq_hz);
}

double ScenarioConfig::effective_link_range() const {
  return phy::friis_max_range(tx_power_watts, effective_rx_sensitivity(), antenna_gain_dbi,
                              antenna_gain_dbi, reflection_coeff_sq, carrier_freq_hz);
}

namespace {

using Field = std::variant<double ScenarioConfig::*, std::uint32_t ScenarioConfig::*,
                           std::uint64_t ScenarioConfig::*, bool ScenarioConfig::*,
                           std::optional<double> ScenarioConfig::*,
                           Protocol ScenarioConfig::*, ChargingMode ScenarioConfig::*>;

struct Key {
  std::string_view name;
  Field field;
};

// Order here is the serialization order.
constexpr auto kKeys = std::to_array<Key>({
    {"node_count", &ScenarioConfig::node_count},
    {"field_side", &ScenarioConfig::field_side},
    {"sim_duration", &ScenarioConfig::sim_duration},
    {"pause_time", &ScenarioConfig::pause_time},
    {"speed_min", &ScenarioConfig::speed_min},
    {"speed_max", &ScenarioConfig::speed_max},
    {"initial_energy", &ScenarioConfig::initial_energy},
    {"e_elec", &ScenarioConfig::e_elec},
    {"e_amp", &ScenarioConfig::e_amp},
    {"path_loss_alpha", &ScenarioConfig::path_loss_alpha},
    {"tx_power_watts", &ScenarioConfig::tx_power_watts},
    {"rx_power_watts", &ScenarioConfig::rx_power_watts},
    {"e_g", &ScenarioConfig::e_g},
    {"e_s", &ScenarioConfig::e_s},
    {"energy_charging", &ScenarioConfig::energy_charging},
    {"radio_range", &ScenarioConfig::radio_range},
    {"rx_sensitivity_watts", &ScenarioConfig::rx_sensitivity_watts},
    {"antenna_gain_dbi", &ScenarioConfig::antenna_gain_dbi},
    {"reflection_coeff_sq", &ScenarioConfig::reflection_coeff_sq},
    {"carrier_freq_hz", &ScenarioConfig::carrier_freq_hz},
    {"data_rate_bps", &ScenarioConfig::data_rate_bps},
    {"control_packet_bytes", &ScenarioConfig::control_packet_bytes},
    {"data_packet_bytes", &ScenarioConfig::data_packet_bytes},
    {"traffic_period", &ScenarioConfig::traffic_period},
    {"events_per_period", &ScenarioConfig::events_per_period},
    {"sink_node", &ScenarioConfig::sink_node},
    {"sink_fixed", &ScenarioConfig::sink_fixed},
    {"protocol", &ScenarioConfig::protocol},
    {"rng_seed", &ScenarioConfig::rng_seed},
    {"mobility_tick", &ScenarioConfig::mobility_tick},
    {"metrics_tick", &ScenarioConfig::metrics_tick},
    {"hello_period", &ScenarioConfig::hello_period},
    {"election_check_period", &ScenarioConfig::election_check_period},
    {"drain_sample_period", &ScenarioConfig::drain_sample_period},
    {"drain_ewma_alpha", &ScenarioConfig::drain_ewma_alpha},
    {"e_threshold", &ScenarioConfig::e_threshold},
    {"r_threshold", &ScenarioConfig::r_threshold},
    {"m_threshold", &ScenarioConfig::m_threshold},
    {"p_threshold", &ScenarioConfig::p_threshold},
    {"precinct_grid_dim", &ScenarioConfig::precinct_grid_dim},
    {"aggregation_ratio", &ScenarioConfig::aggregation_ratio},
    {"aggregation_window", &ScenarioConfig::aggregation_window},
    {"mac_slot", &ScenarioConfig::mac_slot},
    {"mac_max_retries", &ScenarioConfig::mac_max_retries},
    {"mac_backoff_slots", &ScenarioConfig::mac_backoff_slots},
    {"mac_cw_max", &ScenarioConfig::mac_cw_max},
    {"channel_rate_bps", &ScenarioConfig::channel_rate_bps},
    {"flood_jitter", &ScenarioConfig::flood_jitter},
    {"route_expiry", &ScenarioConfig::route_expiry},
    {"flood_state_ttl", &ScenarioConfig::flood_state_ttl},
    {"max_paths", &ScenarioConfig::max_paths},
    {"discovery_timeout", &ScenarioConfig::discovery_timeout},
    {"discovery_retries", &ScenarioConfig::discovery_retries},
    {"buffer_ttl", &ScenarioConfig::buffer_ttl},
    {"data_ttl_hops", &ScenarioConfig::data_ttl_hops},
});

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if constexpr (std::is_unsigned_v<T>) {
    if (!text.empty() && text.front() == '-') return std::nullopt;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void assign(ScenarioConfig& cfg, const Key& key, std::string_view value, int line) {
  const auto fail = [&](std::string_view what) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + std::string(key.name) +
                          "': " + std::string(what) + " '" + std::string(value) + "'",
                      std::string(key.name), line);
  };
  std::visit(
      [&](auto member) {
        using M = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<M, double>) {
          auto v = parse_number<double>(value);
          if (!v) fail("expected a number, got");
          cfg.*member = *v;
        } else if constexpr (std::is_same_v<M, std::optional<double>>) {
          auto v = parse_number<double>(value);
          if (!v) fail("expected a number, got");
          cfg.*member = *v;
        } else if constexpr (std::is_same_v<M, std::uint32_t> ||
                             std::is_same_v<M, std::uint64_t>) {
          auto v = parse_number<M>(value);
          if (!v) fail("expected a non-negative integer, got");
          cfg.*member = *v;
        } else if constexpr (std::is_same_v<M, bool>) {
          if (value == "true") cfg.*member = true;
          else if (value == "false") cfg.*member = false;
          else fail("expected true or false, got");
        } else if constexpr (std::is_same_v<M, Protocol>) {
          auto p = parse_protocol(value);
          if (!p) fail("expected e2rp or aodv, got");
          cfg.*member = *p;
        } else if constexpr (std::is_same_v<M, ChargingMode>) {
          if (value == "per_bit") cfg.*member = ChargingMode::PerBit;
          else if (value == "duration") cfg.*member = ChargingMode::Duration;
          else fail("expected per_bit or duration, got");
        }
      },
      key.field);
}

std::optional<std::string> render(const ScenarioConfig& cfg, const Key& key) {
  return std::visit(
      [&](auto member) -> std::optional<std::string> {
        using M = std::remove_cvref_t<decltype(cfg.*member)>;
        const auto& v = cfg.*member;
        if constexpr (std::is_same_v<M, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<M, std::optional<double>>) {
          if (!v) return std::nullopt;
          return format_double(*v);
        } else if constexpr (std::is_same_v<M, bool>) {
          return std::string(v ? "true" : "false");
        } else if constexpr (std::is_same_v<M, Protocol>) {
          return std::string(to_string(v));
        } else if constexpr (std::is_same_v<M, ChargingMode>) {
          return std::string(v == ChargingMode::PerBit ? "per_bit" : "duration");
        } else {
          return std::to_string(v);
        }
      },
      key.field);
}

void require(bool ok, std::string_view key, std::string_view invariant) {
  if (!ok) {
    throw ConfigError("invalid value for '" + std::string(key) + "': " + std::string(invariant),
                      std::string(key));
  }
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.node_count >= 1, "node_count", "must be at least 1");
  require(c.field_side > 0, "field_side", "must be > 0");
  require(c.sim_duration > 0, "sim_duration", "must be > 0");
  require(c.pause_time >= 0, "pause_time", "must be >= 0");
  require(c.speed_min >= 0, "speed_min", "must be >= 0");
  require(c.speed_min <= c.speed_max, "speed_min", "speed_min must not exceed speed_max");
  require(c.speed_max > 0, "speed_max", "must be > 0");

  require(c.initial_energy > 0, "initial_energy", "energies must be strictly positive");
  require(c.e_elec > 0, "e_elec", "energies must be strictly positive");
  require(c.e_amp > 0, "e_amp", "energies must be strictly positive");
  require(c.path_loss_alpha > 0, "path_loss_alpha", "must be > 0");
  require(c.tx_power_watts > 0, "tx_power_watts", "powers must be strictly positive");
  require(c.rx_power_watts > 0, "rx_power_watts", "powers must be strictly positive");
  require(c.e_g > 0, "e_g", "powers must be strictly positive");
  require(c.e_s > 0, "e_s", "powers must be strictly positive");

  require(c.radio_range > 0, "radio_range", "must be > 0");
  require(!c.rx_sensitivity_watts || *c.rx_sensitivity_watts > 0, "rx_sensitivity_watts",
          "powers must be strictly positive");
  require(c.reflection_coeff_sq >= 0 && c.reflection_coeff_sq < 1, "reflection_coeff_sq",
          "must lie in [0, 1)");
  require(c.carrier_freq_hz > 0, "carrier_freq_hz", "must be > 0");

  require(c.data_rate_bps > 0, "data_rate_bps", "rates must be strictly positive");
  require(c.control_packet_bytes > 0, "control_packet_bytes", "must be > 0");
  require(c.data_packet_bytes > 0, "data_packet_bytes", "must be > 0");
  require(c.traffic_period > 0, "traffic_period", "periods must be strictly positive");
  require(c.sink_node < c.node_count, "sink_node", "must be a valid node id");

  require(c.mobility_tick > 0, "mobility_tick", "periods must be strictly positive");
  require(c.metrics_tick > 0, "metrics_tick", "periods must be strictly positive");
  require(c.hello_period > 0, "hello_period", "periods must be strictly positive");
  require(c.election_check_period > 0, "election_check_period",
          "periods must be strictly positive");
  require(c.drain_sample_period > 0, "drain_sample_period",
          "periods must be strictly positive");
  require(c.drain_ewma_alpha >= 0 && c.drain_ewma_alpha <= 1, "drain_ewma_alpha",
          "must lie in [0, 1]");

  require(c.e_threshold > 0, "e_threshold", "thresholds must be strictly positive");
  require(!c.r_threshold || *c.r_threshold > 0, "r_threshold",
          "thresholds must be strictly positive");
  require(!c.m_threshold || *c.m_threshold > 0, "m_threshold",
          "thresholds must be strictly positive");
  require(c.p_threshold >= 0 && c.p_threshold <= 1, "p_threshold", "must lie in [0, 1]");
  require(c.precinct_grid_dim >= 1, "precinct_grid_dim", "must be at least 1");
  require(c.aggregation_ratio > 0 && c.aggregation_ratio <= 1, "aggregation_ratio",
          "must lie in (0, 1]");
  require(c.aggregation_window > 0, "aggregation_window", "periods must be strictly positive");

  require(c.mac_slot > 0, "mac_slot", "periods must be strictly positive");
  require(c.mac_backoff_slots >= 1, "mac_backoff_slots", "must be at least 1");
  require(c.mac_cw_max >= c.mac_backoff_slots, "mac_cw_max",
          "must be >= mac_backoff_slots");
  require(c.channel_rate_bps > 0, "channel_rate_bps", "rates must be strictly positive");

  require(c.flood_jitter >= 0, "flood_jitter", "must be >= 0");
  require(c.route_expiry > 0, "route_expiry", "periods must be strictly positive");
  require(c.flood_state_ttl > 0, "flood_state_ttl", "periods must be strictly positive");
  require(c.max_paths >= 1, "max_paths", "must be at least 1");
  require(c.discovery_timeout > 0, "discovery_timeout", "periods must be strictly positive");
  require(c.buffer_ttl > 0, "buffer_ttl", "periods must be strictly positive");
  require(c.data_ttl_hops >= 1, "data_ttl_hops", "must be at least 1");

  for (const auto& key : kKeys) {
    std::visit(
        [&](auto member) {
          using M = std::remove_cvref_t<decltype(c.*member)>;
          if constexpr (std::is_same_v<M, double>) {
            require(std::isfinite(c.*member), key.name, "must be finite");
          }
        },
        key.field);
  }
}

ScenarioConfig parse_config(std::string_view source) {
  ScenarioConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto end = source.find('\n', pos);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                            std::string(line) + "'",
                        {}, line_no);
    }
    const auto name = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto* key = std::find_if(kKeys.begin(), kKeys.end(),
                                   [&](const Key& k) { return k.name == name; });
    if (key == kKeys.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                            std::string(name) + "'",
                        std::string(name), line_no);
    }
    assign(cfg, *key, value, line_no);
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const auto& key : kKeys) {
    if (auto v = render(config, key)) {
      out.append(key.name).append(" = ").append(*v).push_back('\n');
    }
  }
  return out;
}

}  // namespace mwsn
