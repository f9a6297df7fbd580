#include <benchmark/benchmark.h>

#include "eonsim/prioritizer.hpp"
#include "eonsim/rng.hpp"
#include "eonsim/rsa.hpp"
#include "eonsim/spectrum.hpp"
#include "eonsim/topology.hpp"

using namespace eonsim;

namespace {

std::vector<DisruptedService> make_batch(int size) {
  Rng rng(12);
  std::vector<DisruptedService> batch;
  for (int i = 0; i < size; ++i) {
    const int rate = std::vector<int>{100, 200, 400}[rng.bounded(3)];
    batch.push_back({i, rate, 1 + static_cast<int>(rng.bounded(3)),
                     rng.exponential(1800.0), i});
  }
  return batch;
}

void BM_rank_fdsp(benchmark::State& state) {
  const auto batch = make_batch(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_fdsp(batch));
  }
}
BENCHMARK(BM_rank_fdsp)->Arg(70)->Arg(200)->Arg(1000);

void BM_first_fit(benchmark::State& state) {
  Topology topo = [] {
    std::vector<NodeInfo> nodes;
    for (int i = 0; i < 5; ++i) nodes.push_back({i, "n", 0, 0});
    std::vector<LinkState> links;
    for (int i = 0; i < 4; ++i) {
      links.push_back({i, i, i + 1, 100.0, true, {}});
    }
    return Topology(std::move(nodes), std::move(links));
  }();
  topo.reset_grids(256);
  Rng rng(9);
  for (LinkState& l : topo.links()) {
    for (int s = 0; s < 256; ++s) {
      if (rng.uniform01() < 0.6) l.grid.set_owner(s, 1 + rng.bounded(100));
    }
  }
  std::vector<LinkState*> path{&topo.link(0), &topo.link(1), &topo.link(2),
                               &topo.link(3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum::first_fit(path, 4));
  }
}
BENCHMARK(BM_first_fit);

void BM_ksp_germany50(benchmark::State& state) {
  const Topology topo =
      load_topology_file(std::string(EONSIM_DATA_DIR) + "/germany50.topo");
  Rng rng(5);
  for (auto _ : state) {
    const NodeId s = static_cast<NodeId>(rng.bounded(topo.node_count()));
    NodeId d = static_cast<NodeId>(rng.bounded(topo.node_count() - 1));
    if (d >= s) ++d;
    benchmark::DoNotOptimize(k_shortest_paths(topo, s, d, 5));
  }
}
BENCHMARK(BM_ksp_germany50);

}  // namespace

BENCHMARK_MAIN();
