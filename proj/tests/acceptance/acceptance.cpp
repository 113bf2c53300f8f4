// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ideal_net.hpp"
#include "mwsn/clustering/clustering.hpp"
#include "mwsn/engine/rng.hpp"
#include "mwsn/engine/simulator.hpp"
#include "mwsn/metrics/report.hpp"
#include "mwsn/mobility/mobility.hpp"
#include "mwsn/phy/energy.hpp"
#include "mwsn/phy/radio.hpp"
#include "mwsn/routing/e2rp.hpp"

namespace {

using namespace mwsn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const char* name, const Verdict& v) {
  std::printf("%s [%2d] %s%s%s\n", v.pass ? "PASS" : "FAIL", id, name,
              v.detail.empty() ? "" : " :: ", v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Every report produced anywhere in the suite passes through here.
Verdict conservation;
std::size_t conserved_nodes = 0;

void check_conservation(const metrics::RunReport& r) {
  for (const auto& n : r.per_node) {
    const double sum = n.consumed_tx + n.consumed_rx + n.consumed_sense + n.consumed_idle;
    const double rel = std::abs(n.initial_energy - n.surplus_final - sum) / n.initial_energy;
    ++conserved_nodes;
    if (!(rel <= 1e-12)) {
      conservation.fail(fmt("node %.0f off by %.3g (seed %.0f)", n.id, rel,
                            static_cast<double>(r.seed)));
    }
  }
}

metrics::RunReport checked_run(const ScenarioConfig& c) {
  auto r = run(c);
  check_conservation(r);
  return r;
}

// ---- 1, 2: directional comparison over the default scenario ---------------

struct SweepResult {
  std::map<std::pair<Protocol, double>, std::vector<metrics::RunReport>> cells;
  double wall = 0.0;
};

SweepResult default_sweep() {
  SweepResult out;
  const auto t0 = Clock::now();
  for (double speed : {5.0, 10.0, 15.0, 20.0}) {
    for (auto protocol : {Protocol::E2RP, Protocol::AODV}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ScenarioConfig c;
        c.protocol = protocol;
        c.speed_max = speed;
        c.speed_min = std::min(c.speed_min, speed);
        c.rng_seed = seed;
        out.cells[{protocol, speed}].push_back(checked_run(c));
      }
    }
  }
  out.wall = seconds_since(t0);
  return out;
}

double mean_of(const std::vector<metrics::RunReport>& runs,
               const std::function<std::optional<double>(const metrics::RunReport&)>& f) {
  double sum = 0;
  int n = 0;
  for (const auto& r : runs) {
    if (const auto v = f(r)) {
      sum += *v;
      ++n;
    }
  }
  return n ? sum / n : std::nan("");
}

void criteria_1_2(const SweepResult& s) {
  Verdict pdf, life;
  std::ostringstream pdf_note, life_note;
  for (double speed : {5.0, 10.0, 15.0, 20.0}) {
    const auto& e = s.cells.at({Protocol::E2RP, speed});
    const auto& a = s.cells.at({Protocol::AODV, speed});
    const double pe = mean_of(e, [](const auto& r) { return r.pdf; });
    const double pa = mean_of(a, [](const auto& r) { return r.pdf; });
    const double le = mean_of(e, [](const auto& r) { return r.network_lifetime; });
    const double la = mean_of(a, [](const auto& r) { return r.network_lifetime; });
    pdf_note << fmt(" v%.0f:%.3f/%.3f", speed, pe, pa);
    life_note << fmt(" v%.0f:%.1f/%.1f", speed, le, la);
    if (!(pe >= pa)) pdf.fail(fmt("speed %.0f: e2rp %.4f < aodv %.4f", speed, pe, pa));
    if (!(le >= la)) life.fail(fmt("speed %.0f: e2rp %.2f < aodv %.2f", speed, le, la));
  }
  if (s.wall >= 600.0) pdf.fail(fmt("sweep took %.1f s", s.wall));
  if (pdf.pass) pdf.detail = "e2rp/aodv mean pdf" + pdf_note.str() + fmt(" (%.1f s)", s.wall);
  if (life.pass) life.detail = "e2rp/aodv mean lifetime" + life_note.str();
  report(1, "mean PDF e2rp >= aodv at every speed, 10 seeds", pdf);
  report(2, "mean network lifetime e2rp >= aodv at every speed", life);
}

// ---- 4: determinism ---------------------------------------------------------

Verdict criterion_4() {
  Verdict v;
  Rng rng(2024);
  for (int i = 0; i < 5; ++i) {
    ScenarioConfig c;
    c.node_count = static_cast<std::uint32_t>(rng.uniform_int(10, 80));
    c.sim_duration = rng.uniform(50.0, 250.0);
    c.field_side = rng.uniform(20.0, 400.0);
    c.speed_min = rng.uniform(0.5, 5.0);
    c.speed_max = c.speed_min + rng.uniform(0.0, 15.0);
    c.protocol = rng.uniform01() < 0.5 ? Protocol::AODV : Protocol::E2RP;
    c.precinct_grid_dim = static_cast<std::uint32_t>(rng.uniform_int(1, 6));
    c.rng_seed = rng.next();
    const auto a = metrics::to_json(checked_run(c));
    const auto b = metrics::to_json(checked_run(c));
    const auto ha = std::hash<std::string>{}(a), hb = std::hash<std::string>{}(b);
    if (a != b || ha != hb) v.fail("config " + std::to_string(i) + " differs");
  }
  if (v.pass) v.detail = "5 configs, identical bytes";
  return v;
}

// ---- 5: link budget ---------------------------------------------------------

double friis_oracle(double pt, double pr, double gt_dbi, double gr_dbi, double refl, double f) {
  const long double lambda = 299792458.0L / f;
  const long double gt = std::pow(10.0L, gt_dbi / 10.0L), gr = std::pow(10.0L, gr_dbi / 10.0L);
  return static_cast<double>(lambda / (4.0L * std::numbers::pi_v<long double>) *
                             std::sqrt(pt * gt * gr * (1.0L - refl) / pr));
}

Verdict criterion_5() {
  Verdict v;
  const double r = phy::friis_max_range(0.66, 9.0e-9, 1.2, 1.2, 0.3, 900e6);
  const double oracle = friis_oracle(0.66, 9.0e-9, 1.2, 1.2, 0.3, 900e6);
  if (std::abs(r - 250.0) > 2.5) v.fail(fmt("range %.4f m", r));
  if (std::abs(r - oracle) > 1e-9 * oracle) v.fail(fmt("oracle %.12f vs %.12f", oracle, r));
  Rng rng(5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double pt = rng.uniform(0.01, 2.0), gt = rng.uniform(-3, 6), gr = rng.uniform(-3, 6);
    const double refl = rng.uniform(0.0, 0.95), f = rng.uniform(1e8, 6e9);
    const double range = rng.uniform(1.0, 2000.0);
    const double sens = phy::rx_sensitivity_for_range(range, pt, gt, gr, refl, f);
    const double back = phy::friis_max_range(pt, sens, gt, gr, refl, f);
    worst = std::max(worst, std::abs(back - range) / range);
    const double o = friis_oracle(pt, sens, gt, gr, refl, f);
    worst = std::max(worst, std::abs(back - o) / o);
  }
  if (worst > 1e-9) v.fail(fmt("round trip error %.3g", worst));
  if (v.pass) v.detail = fmt("R(9.0e-9 W) = %.3f m, worst round trip %.2g", r, worst);
  return v;
}

// ---- 6: per-bit transmit energy ----------------------------------------------

Verdict criterion_6() {
  Verdict v;
  const double e_elec = 50e-9, e_amp = 100e-12;
  if (phy::tx_energy_per_bit(10.0, e_elec, e_amp, 2.0) != 60e-9) v.fail("d=10, alpha=2 != 60 nJ");
  Rng rng(6);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double d = rng.uniform(0.0, 500.0), alpha = rng.uniform(2.0, 4.0);
    const long double o = static_cast<long double>(e_elec) +
                          static_cast<long double>(e_amp) * std::pow(static_cast<long double>(d),
                                                                     static_cast<long double>(alpha));
    const double got = phy::tx_energy_per_bit(d, e_elec, e_amp, alpha);
    worst = std::max(worst, static_cast<double>(std::abs((got - o) / o)));
  }
  if (worst > 1e-15) v.fail(fmt("worst relative error %.3g", worst));
  if (v.pass) v.detail = fmt("60 nJ exact, worst relative error %.2g over 1000 draws", worst);
  return v;
}

// ---- 7: mobility metric -------------------------------------------------------

Verdict criterion_7() {
  Verdict v;
  Rng rng(7);
  constexpr double delta = 0.01;
  double worst = 0.0;
  int scenes = 0, bounded = 0;
  while (scenes < 200) {
    const Vec2 pi{rng.uniform(0, 25), rng.uniform(0, 25)}, pj{rng.uniform(0, 25), rng.uniform(0, 25)};
    const Vec2 vi{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    const Vec2 vj{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    const Vec2 r = pj - pi, dv = vj - vi;
    const double d = norm(r);
    if (d < 5.0) continue;
    const double radial = (r.x * dv.x + r.y * dv.y) / d;
    const double tangential = std::abs(r.x * dv.y - r.y * dv.x) / d;
    const std::vector<Vec2> now{pi, pj};
    const std::vector<Vec2> prev{pi - delta * vi, pj - delta * vj};
    const double m = mobility::relative_mobility(0, now, prev, delta).value;
    const double err = std::abs(m - std::abs(radial));
    // truncation error of the backward difference: delta/2 * max d'' with d'' = v_t^2 / d
    // over the step; the closest approach on the step bounds d from below
    const Vec2 back = r - delta * dv;
    const double s = std::clamp((back.x * dv.x + back.y * dv.y) / -(dv.x * dv.x + dv.y * dv.y + 1e-300),
                                0.0, delta);
    const double d_min = norm(back + s * dv);
    if (err > 0.5 * delta * (dv.x * dv.x + dv.y * dv.y) / d_min + 1e-9) v.fail("error above truncation bound");
    ++bounded;
    // relative error ~ delta * v_t^2 / (2 d |v_r|): only bounded once the radial rate
    // dominates and one step moves the pair by at most 1% of their separation
    if (std::abs(radial) < tangential || norm(dv) * delta > 0.01 * d) continue;
    ++scenes;
    worst = std::max(worst, err / std::abs(radial));
  }
  if (worst >= 0.01) v.fail(fmt("worst relative error %.4f at 0.01 s", worst));
  for (int i = 0; i < 100; ++i) {
    std::vector<Vec2> pos;
    const auto n = rng.uniform_int(1, 15);
    for (std::uint64_t k = 0; k < n; ++k) pos.push_back({rng.uniform(0, 25), rng.uniform(0, 25)});
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (mobility::relative_mobility(k, pos, pos, 0.01).value != 0.0) v.fail("static scene not 0");
    }
  }
  if (v.pass) {
    v.detail = fmt("worst relative error %.2g over 200 radial-dominant small-step scenes, %.0f scenes within the truncation bound",
                   worst, bounded);
  }
  return v;
}

// ---- 8: election ---------------------------------------------------------------

double oracle_probability(std::size_t i, const std::vector<clustering::CandidateScore>& s,
                          const clustering::Thresholds& th) {
  double se = 0, sr = 0, sm = 0;
  const auto inv = [](double m) { return 1.0 / (m + clustering::kMobilityEpsilon); };
  for (const auto& c : s) {
    se += c.surplus > th.energy ? c.surplus : 0.0;
    sr += c.tx_range > th.range ? c.tx_range : 0.0;
    sm += c.mobility < th.mobility ? inv(c.mobility) : 0.0;
  }
  const auto& c = s[i];
  const double p = (c.surplus > th.energy ? c.surplus / se : 0.0) +
                   (c.tx_range > th.range ? c.tx_range / sr : 0.0) +
                   (c.mobility < th.mobility ? inv(c.mobility) / sm : 0.0);
  return p / 3.0;
}

Verdict criterion_8() {
  Verdict v;
  Rng rng(8);
  const clustering::Thresholds th{1.0, 7.07, 12.5};
  int fired = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = rng.uniform_int(2, 20);
    std::vector<clustering::CandidateScore> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i].node = static_cast<NodeId>(100 + 3 * i);
      // coarse values make exact ties common
      s[i].surplus = rng.uniform01() < 0.3 ? 2.0 : rng.uniform(0.0, 5.0);
      s[i].tx_range = rng.uniform01() < 0.5 ? 250.0 : rng.uniform(0.0, 15.0);
      s[i].mobility = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.0, 25.0);
      s[i].vid = clustering::compute_vid(s[i].surplus, n);
    }
    clustering::score_precinct(s, th);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s[i].p_fusion >= 0.0 && s[i].p_fusion <= 1.0)) v.fail("p outside [0,1]");
      if (std::abs(s[i].p_fusion - oracle_probability(i, s, th)) > 1e-12) {
        v.fail("probability differs from oracle");
      }
    }
    // brute-force argmax with the documented tie-breaks
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const auto& a = s[i];
      const auto& b = s[best];
      if (a.p_fusion > b.p_fusion || (a.p_fusion == b.p_fusion && a.vid > b.vid) ||
          (a.p_fusion == b.p_fusion && a.vid == b.vid && a.node < b.node)) {
        best = i;
      }
    }
    const NodeId head = clustering::elect_fusion_head(s);
    const auto winners = std::count_if(s.begin(), s.end(), [&](const auto& c) { return c.node == head; });
    if (winners != 1) v.fail("elected head is not exactly one member");
    if (head != s[best].node) v.fail("argmax mismatch in trial " + std::to_string(trial));

    const auto& incumbent = s[rng.uniform_int(0, n - 1)];
    const auto re = clustering::reelection_check(incumbent.node, s, 0.5);
    const bool should = incumbent.p_fusion < 0.5;
    if (re.new_head.has_value() != should) v.fail("re-election rule violated");
    if (re.new_head && *re.new_head == incumbent.node) v.fail("handover to the same head");
    fired += re.new_head.has_value();
  }
  if (v.pass) v.detail = "1000 precincts, re-election fired " + std::to_string(fired) + " times";
  return v;
}

// ---- 9: loop freedom -----------------------------------------------------------

ScenarioConfig multihop(Protocol p, std::uint64_t seed) {
  ScenarioConfig c;
  c.node_count = 40;
  c.field_side = 600.0;
  c.radio_range = 150.0;
  c.precinct_grid_dim = 4;
  c.sim_duration = 200.0;
  c.speed_min = 1.0;
  c.speed_max = 5.0;
  c.protocol = p;
  c.rng_seed = seed;
  return c;
}

std::vector<NodeId> path_from_trace(const std::string& line) {
  std::vector<NodeId> out;
  const auto at = line.find(" path=");
  if (at == std::string::npos) return out;
  std::istringstream in(line.substr(at + 6));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty() || !std::isdigit(static_cast<unsigned char>(tok[0]))) break;
    out.push_back(static_cast<NodeId>(std::stoul(tok)));
  }
  return out;
}

Verdict criterion_9() {
  Verdict v;
  SimOptions o;
  o.trace = true;
  o.audit = true;
  std::size_t paths = 0, multi = 0, same_seq_checks = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = seed % 2 ? Protocol::E2RP : Protocol::AODV;
    const auto res = simulate(multihop(p, seed), {}, o);
    check_conservation(res.report);
    if (res.audit.loop_drops) v.fail("loop drop in seed " + std::to_string(seed));
    std::istringstream in(res.trace);
    std::string line;
    std::size_t traced = 0;
    while (std::getline(in, line)) {
      if (line.find(" DELIVER ") == std::string::npos) continue;
      const auto hops = path_from_trace(line);
      ++traced;
      if (hops.empty()) v.fail("DELIVER line without path");
      if (std::set<NodeId>(hops.begin(), hops.end()).size() != hops.size()) {
        v.fail("revisit in seed " + std::to_string(seed) + ": " + line);
      }
      multi += hops.size() > 2;
    }
    if (traced != res.audit.delivered_paths.size()) v.fail("trace and audit disagree");
    paths += traced;
    for (const auto& m : res.audit.mutations) {
      if (!m.same_sequence || !m.accepted) continue;
      ++same_seq_checks;
      const bool ok = p == Protocol::E2RP ? m.upstream_advertised < m.advertised_before
                                          : m.path_hops < m.advertised_before;
      if (!ok) v.fail("hop rule violated at node " + std::to_string(m.node));
    }
  }
  if (multi == 0) v.fail("no multi-hop delivery exercised");
  if (v.pass) {
    v.detail = std::to_string(paths) + " delivered paths (" + std::to_string(multi) +
               " multi-hop), " + std::to_string(same_seq_checks) + " same-sequence acceptances";
  }
  return v;
}

// ---- 10: max-surplus propagation -----------------------------------------------

void simple_paths(const std::vector<std::vector<bool>>& adj, NodeId at, NodeId dest,
                  std::vector<NodeId>& stack, std::vector<bool>& used,
                  std::vector<std::vector<NodeId>>& out) {
  if (at == dest) {
    out.push_back(stack);
    return;
  }
  for (NodeId j = 0; j < adj.size(); ++j) {
    if (!adj[at][j] || used[j]) continue;
    used[j] = true;
    stack.push_back(j);
    simple_paths(adj, j, dest, stack, used, out);
    stack.pop_back();
    used[j] = false;
  }
}

bool connected(const std::vector<std::vector<bool>>& adj) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<NodeId> todo{0};
  seen[0] = true;
  while (!todo.empty()) {
    const NodeId a = todo.back();
    todo.pop_back();
    for (NodeId b = 0; b < adj.size(); ++b) {
      if (adj[a][b] && !seen[b]) {
        seen[b] = true;
        todo.push_back(b);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

Verdict criterion_10() {
  Verdict v;
  std::size_t topologies = 0, copies = 0, routes = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    }
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (mask >> k & 1u) adj[pairs[k].first][pairs[k].second] = adj[pairs[k].second][pairs[k].first] = true;
      }
      if (!connected(adj)) continue;
      ++topologies;

      testing::IdealNet net(n, Protocol::E2RP, {}, mask * 7919u + n, 0.02);
      Rng rng(mask + 1000u * n);
      for (NodeId i = 0; i < n; ++i) net.nodes[i].surplus = rng.uniform(1.5, 5.0);
      for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = 0; b < n; ++b) {
          if (adj[a][b]) net.link(a, b);
        }
      }
      const NodeId src = 0, dst = static_cast<NodeId>(n - 1);
      net.at(0.0, [&] { net.agents[src]->originate(1, dst); });
      net.run_until(0.9);

      std::vector<std::vector<NodeId>> all;
      std::vector<NodeId> stack{src};
      std::vector<bool> used(n, false);
      used[src] = true;
      simple_paths(adj, src, dst, stack, used, all);
      std::map<std::vector<NodeId>, double> truth;
      for (const auto& p : all) {
        double m = 0.0;
        for (std::size_t k = 0; k + 1 < p.size(); ++k) m = std::max(m, net.nodes[p[k]].surplus);
        truth[p] = m;
      }

      if (net.answered.empty()) v.fail("no copy reached the destination");
      for (const auto& rreq : net.answered) {
        ++copies;
        auto p = rreq.trace;
        p.push_back(dst);
        const auto it = truth.find(p);
        if (it == truth.end()) {
          v.fail("answered copy followed a non-path");
        } else if (rreq.max_surplus_energy != it->second) {
          v.fail(fmt("copy max %.6f vs path max %.6f", rreq.max_surplus_energy, it->second));
        }
      }
      const auto& agent = dynamic_cast<const routing::E2rpAgent&>(*net.agents[src]);
      const auto* entry = agent.table().find(dst);
      if (!entry || entry->route_list.empty()) {
        v.fail("source holds no route");
        continue;
      }
      for (const auto& r : entry->route_list) {
        ++routes;
        bool matched = false;
        for (const auto& rreq : net.answered) {
          const NodeId first = rreq.trace.size() > 1 ? rreq.trace[1] : dst;
          auto p = rreq.trace;
          p.push_back(dst);
          if (first == r.next_hop && truth.count(p) && truth[p] == r.max_surplus_energy) matched = true;
        }
        if (!matched) v.fail("stored route surplus matches no enumerated path via its next hop");
      }
    }
  }
  if (v.pass) {
    v.detail = std::to_string(topologies) + " topologies, " + std::to_string(copies) +
               " answered copies, " + std::to_string(routes) + " stored routes";
  }
  return v;
}

// ---- 11: failover without rediscovery ------------------------------------------

struct BreakRun {
  RunResult result;
  std::size_t routes_before = 0;
  NodeId broken = kNoNode;
};

ScenarioConfig diamond_config(Protocol p, std::uint64_t seed) {
  ScenarioConfig c;
  c.node_count = 4;
  c.field_side = 300.0;
  c.precinct_grid_dim = 3;
  c.radio_range = 120.0;
  c.sink_node = 3;
  c.sim_duration = 40.0;
  c.protocol = p;
  c.rng_seed = seed;
  return c;
}

ScenarioScript diamond_script() {
  ScenarioScript s;
  // source, two relays, sink; each in its own precinct
  s.positions = {{50, 150}, {150, 100}, {150, 200}, {250, 150}};
  s.static_nodes = true;
  s.idle_drain = false;
  s.random_traffic = false;
  s.initial_energy = {3.0, 5.0, 4.0, 5.0};
  for (int t = 1; t <= 30; ++t) s.readings.push_back({static_cast<double>(t), 0});
  s.probes.push_back({4.5, 0, 3});
  return s;
}

constexpr double kBreakAt = 5.0;

BreakRun break_run(Protocol p, std::uint64_t seed) {
  // first pass finds the relay in use, second pass fails it
  SimOptions o;
  o.audit = true;
  auto script = diamond_script();
  const auto probe = simulate(diamond_config(p, seed), script, o).audit.probes.at(0);
  BreakRun b;
  b.routes_before = probe.routes;
  if (!probe.next_hop) return b;
  b.broken = *probe.next_hop;
  script.kills.push_back({kBreakAt, b.broken});
  script.probes.push_back({kBreakAt + 10.0, 0, 3});
  b.result = simulate(diamond_config(p, seed), script, o);
  check_conservation(b.result.report);
  return b;
}

Verdict criterion_11() {
  Verdict v;
  std::optional<BreakRun> e2rp;
  std::uint64_t seed = 1;
  for (; seed <= 50; ++seed) {
    auto b = break_run(Protocol::E2RP, seed);
    if (b.routes_before >= 2 && b.broken != kNoNode) {
      e2rp = std::move(b);
      break;
    }
  }
  if (!e2rp) {
    v.fail("no seed produced two stored routes before the break");
    return v;
  }
  std::size_t e2rp_after = 0;
  for (const auto& f : e2rp->result.audit.floods) {
    if (f.routes_at_origin > 0) v.fail(fmt("e2rp flooded at %.3f with %.0f routes", f.time, f.routes_at_origin));
    if (f.time >= kBreakAt) ++e2rp_after;
  }
  if (e2rp_after != 0) v.fail("e2rp flooded after the break");
  std::size_t rerouted = 0;
  for (const auto& path : e2rp->result.audit.delivered_paths) {
    rerouted += path.size() == 3 && path[1] != e2rp->broken;
  }
  if (rerouted == 0) v.fail("no delivery over the alternate path");

  const auto aodv = break_run(Protocol::AODV, seed);
  std::size_t aodv_after = 0;
  for (const auto& f : aodv.result.audit.floods) aodv_after += f.time >= kBreakAt;
  if (aodv.broken == kNoNode) v.fail("aodv had no route before the break");
  if (aodv_after < 1) v.fail("aodv did not flood after the break");
  if (v.pass) {
    v.detail = "seed " + std::to_string(seed) + ": e2rp 0 floods after break (" +
               std::to_string(rerouted) + " rerouted deliveries), aodv " +
               std::to_string(aodv_after) + " floods";
  }
  return v;
}

// ---- 12: runtime ------------------------------------------------------------------

Verdict criterion_12() {
  Verdict v;
  double worst = 0.0;
  for (auto p : {Protocol::E2RP, Protocol::AODV}) {
    ScenarioConfig c;
    c.protocol = p;
    const auto t0 = Clock::now();
    const auto r = checked_run(c);
    const double wall = seconds_since(t0);
    worst = std::max(worst, wall);
    if (r.per_node.size() != 100 || r.config.sim_duration != 500.0) v.fail("not the default run");
  }
  if (worst >= 60.0) v.fail(fmt("default run took %.2f s", worst));
  if (v.pass) v.detail = fmt("slowest default run %.3f s", worst);
  return v;
}

}  // namespace

int main() {
  const auto sweep = default_sweep();
  criteria_1_2(sweep);
  const auto v4 = criterion_4();
  const auto v5 = criterion_5();
  const auto v6 = criterion_6();
  const auto v7 = criterion_7();
  const auto v8 = criterion_8();
  const auto v9 = criterion_9();
  const auto v10 = criterion_10();
  const auto v11 = criterion_11();
  const auto v12 = criterion_12();

  if (conservation.pass) {
    conservation.detail = std::to_string(conserved_nodes) + " node ledgers within 1e-12";
  }
  report(3, "energy conservation per node", conservation);
  report(4, "byte-identical JSON for repeated runs", v4);
  report(5, "link budget range and inversion", v5);
  report(6, "per-bit transmit energy", v6);
  report(7, "relative mobility backward difference", v7);
  report(8, "fusion head election properties", v8);
  report(9, "loop freedom and hop acceptance rule", v9);
  report(10, "max surplus equals brute-force path maximum", v10);
  report(11, "failover without rediscovery after a link break", v11);
  report(12, "default run under 60 s", v12);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
