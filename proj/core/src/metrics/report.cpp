#include "mwsn/metrics/report.hpp"

#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <charconv>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace mwsn::metrics {

namespace {

using Json = nlohmann::ordered_json;

std::string shortest(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> optional_double(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// The config echo mirrors the text grammar, with numbers and booleans typed.
Json config_json(const ScenarioConfig& config) {
  Json out = Json::object();
  const std::string text = serialize_config(config);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto eq = line.find(" = ");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (value == "true" || value == "false") {
      out[key] = value == "true";
      continue;
    }
    std::uint64_t u = 0;
    if (auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), u);
        ec == std::errc{} && p == value.data() + value.size()) {
      out[key] = u;
      continue;
    }
    double d = 0.0;
    if (auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
        ec == std::errc{} && p == value.data() + value.size()) {
      out[key] = d;
      continue;
    }
    out[key] = value;
  }
  return out;
}

ScenarioConfig config_from_json(const Json& j) {
  std::string text;
  for (const auto& [key, value] : j.items()) {
    text += key + " = ";
    if (value.is_boolean()) {
      text += value.get<bool>() ? "true" : "false";
    } else if (value.is_number_unsigned()) {
      text += std::to_string(value.get<std::uint64_t>());
    } else if (value.is_number_integer()) {
      text += std::to_string(value.get<std::int64_t>());
    } else if (value.is_number_float()) {
      text += shortest(value.get<double>());
    } else {
      text += value.get<std::string>();
    }
    text += '\n';
  }
  return parse_config(text);
}

}  // namespace

std::string to_json(const RunReport& r) {
  Json j;
  j["seed"] = r.seed;
  j["protocol"] = std::string(to_string(r.protocol));
  j["pdf"] = optional_json(r.pdf);
  j["network_lifetime"] = r.network_lifetime;
  j["lifetime_censored"] = r.lifetime_censored;
  j["end_time"] = r.end_time;
  j["packets"] = {{"generated", r.packets_generated},
                  {"delivered", r.packets_delivered},
                  {"dropped", r.packets_dropped},
                  {"in_flight", r.packets_in_flight}};
  j["stats"] = {{"rreq_floods", r.rreq_floods},
                {"mac_transmissions", r.mac_transmissions},
                {"mac_collisions", r.mac_collisions},
                {"head_changes", r.head_changes}};
  Json nodes = Json::array();
  for (const auto& n : r.per_node) {
    nodes.push_back({{"id", n.id},
                     {"initial_energy", n.initial_energy},
                     {"surplus_final", n.surplus_final},
                     {"consumed",
                      {{"tx", n.consumed_tx},
                       {"rx", n.consumed_rx},
                       {"sense", n.consumed_sense},
                       {"idle", n.consumed_idle}}},
                     {"death_time", optional_json(n.death_time)}});
  }
  j["per_node"] = std::move(nodes);
  j["config"] = config_json(r.config);
  return j.dump(2) + "\n";
}

RunReport from_json(std::string_view document) {
  try {
    const Json j = Json::parse(document);
    RunReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (!protocol) throw std::runtime_error("unknown protocol in report");
    r.protocol = *protocol;
    r.pdf = optional_double(j.at("pdf"));
    r.network_lifetime = j.at("network_lifetime").get<double>();
    r.lifetime_censored = j.at("lifetime_censored").get<bool>();
    r.end_time = j.at("end_time").get<double>();
    const auto& p = j.at("packets");
    r.packets_generated = p.at("generated").get<std::uint64_t>();
    r.packets_delivered = p.at("delivered").get<std::uint64_t>();
    r.packets_dropped = p.at("dropped").get<std::uint64_t>();
    r.packets_in_flight = p.at("in_flight").get<std::uint64_t>();
    const auto& s = j.at("stats");
    r.rreq_floods = s.at("rreq_floods").get<std::uint64_t>();
    r.mac_transmissions = s.at("mac_transmissions").get<std::uint64_t>();
    r.mac_collisions = s.at("mac_collisions").get<std::uint64_t>();
    r.head_changes = s.at("head_changes").get<std::uint64_t>();
    for (const auto& n : j.at("per_node")) {
      NodeReport node;
      node.id = n.at("id").get<NodeId>();
      node.initial_energy = n.at("initial_energy").get<double>();
      node.surplus_final = n.at("surplus_final").get<double>();
      const auto& c = n.at("consumed");
      node.consumed_tx = c.at("tx").get<double>();
      node.consumed_rx = c.at("rx").get<double>();
      node.consumed_sense = c.at("sense").get<double>();
      node.consumed_idle = c.at("idle").get<double>();
      node.death_time = optional_double(n.at("death_time"));
      r.per_node.push_back(node);
    }
    r.config = config_from_json(j.at("config"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

std::string csv_row(const RunReport& r) {
  std::string row = std::to_string(r.seed);
  row += ',';
  row += to_string(r.protocol);
  row += ',' + shortest(r.config.speed_max);
  row += ',' + (r.pdf ? shortest(*r.pdf) : std::string());
  row += ',' + shortest(r.network_lifetime);
  row += ',' + std::to_string(r.packets_generated);
  row += ',' + std::to_string(r.packets_delivered);
  return row;
}

std::string to_csv(std::span<const RunReport> reports) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : reports) out += csv_row(r) + '\n';
  return out;
}

namespace {

// Two-pass mean and sample deviation.
std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

std::vector<SweepCell> summarize_sweep(std::span<const RunReport> reports) {
  std::map<std::pair<std::string, double>, std::vector<const RunReport*>> groups;
  for (const auto& r : reports) {
    groups[{std::string(to_string(r.protocol)), r.config.speed_max}].push_back(&r);
  }
  std::vector<SweepCell> cells;
  for (const auto& [key, runs] : groups) {
    SweepCell c;
    c.protocol = runs.front()->protocol;
    c.speed_max = key.second;
    c.runs = runs.size();
    std::vector<double> pdfs, lifetimes;
    for (const auto* r : runs) {
      if (r->pdf) pdfs.push_back(*r->pdf);
      lifetimes.push_back(r->network_lifetime);
    }
    c.pdf_runs = pdfs.size();
    std::tie(c.mean_pdf, c.sd_pdf) = mean_sd(pdfs);
    std::tie(c.mean_lifetime, c.sd_lifetime) = mean_sd(lifetimes);
    cells.push_back(c);
  }
  return cells;
}

std::string summary_csv(std::span<const SweepCell> cells) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& c : cells) {
    out += std::string(to_string(c.protocol)) + ',' + shortest(c.speed_max) + ',' +
           std::to_string(c.runs) + ',' + (c.pdf_runs ? shortest(c.mean_pdf) : std::string()) +
           ',' + (c.pdf_runs ? shortest(c.sd_pdf) : std::string()) + ',' +
           shortest(c.mean_lifetime) + ',' + shortest(c.sd_lifetime) + '\n';
  }
  return out;
}

void write_document(const std::string& path, std::string_view document) {
  if (path.empty() || path == "-") {
    std::cout << document << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (out) out << document;
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
}

}  // namespace mwsn::metrics
