#include <benchmark/benchmark.h>

#include <vector>

#include "mwsn/clustering/clustering.hpp"
#include "mwsn/engine/event_queue.hpp"
#include "mwsn/engine/rng.hpp"
#include "mwsn/engine/simulator.hpp"
#include "mwsn/routing/route_table.hpp"

namespace {

using namespace mwsn;

void BM_EventQueue(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<double> times(n);
  for (auto& t : times) t = rng.uniform(0.0, 100.0);
  for (auto _ : state) {
    EventQueue<int> q;
    for (std::size_t i = 0; i < n; ++i) q.schedule(times[i], static_cast<int>(i));
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EventQueue)->Arg(1 << 10)->Arg(1 << 16);

void BM_MultipathOffer(benchmark::State& state) {
  Rng rng(2);
  for (auto _ : state) {
    routing::MultipathTable t;
    for (std::uint32_t k = 0; k < 256; ++k) {
      const auto hops = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
      routing::RoutePath p{static_cast<NodeId>(rng.uniform_int(0, 63)), hops + 1,
                           routing::Readiness::High, rng.uniform(0.0, 5.0), kInfinity};
      benchmark::DoNotOptimize(t.offer(static_cast<NodeId>(k % 16), k / 64, p, hops, 4, 10.0));
    }
  }
}
BENCHMARK(BM_MultipathOffer);

void BM_Election(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<clustering::CandidateScore> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = {static_cast<NodeId>(i), 0.0, rng.uniform(0, 5), 250.0, rng.uniform(0, 20), 0.0};
    s[i].vid = clustering::compute_vid(s[i].surplus, n);
  }
  for (auto _ : state) {
    clustering::score_precinct(s, {});
    benchmark::DoNotOptimize(clustering::elect_fusion_head(s));
  }
}
BENCHMARK(BM_Election)->Arg(4)->Arg(20);

void BM_Run(benchmark::State& state) {
  ScenarioConfig c;
  c.protocol = state.range(0) ? Protocol::AODV : Protocol::E2RP;
  c.sim_duration = 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
}
BENCHMARK(BM_Run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
