#include <benchmark/benchmark.h>

#include <random>

#include "mrx/env.hpp"
#include "mrx/policy_model.hpp"
#include "mrx/roadmap.hpp"
#include "mrx/sensing.hpp"

namespace {

using namespace mrx;

void BM_LidarScan(benchmark::State& state) {
  EpisodeConfig c;
  c.robots = 1;
  c.map = MapSpec::cells(MapKind::Complex, 1, 160, 120);
  const Episode ep(c);
  const OccupancyGrid& g = ep.truth();
  const Vec2 origin = ep.robot(0).position;
  const SensorSpec spec{static_cast<double>(state.range(0)), 360};
  for (auto _ : state) benchmark::DoNotOptimize(lidar_scan(g, origin, spec));
}
BENCHMARK(BM_LidarScan)->Arg(4)->Arg(8)->Arg(16);

void BM_LocalGraph(benchmark::State& state) {
  EpisodeConfig c;
  c.robots = 1;
  c.map = MapSpec::cells(MapKind::Hybrid, 2, 160, 120);
  const Episode ep(c);
  const RobotState& r = ep.robot(0);
  for (auto _ : state) benchmark::DoNotOptimize(build_local_graph(r.belief.grid(), r.position, c.graph));
}
BENCHMARK(BM_LocalGraph);

void BM_EpisodeStep(benchmark::State& state) {
  EpisodeConfig c;
  c.robots = static_cast<int>(state.range(0));
  c.map = MapSpec::cells(MapKind::Corridor, 3, 160, 120);
  for (auto _ : state) {
    state.PauseTiming();
    Episode ep(c);
    std::vector<std::ptrdiff_t> targets(static_cast<std::size_t>(c.robots), kStay);
    for (int i = 0; i < c.robots; ++i) {
      const Observation& o = ep.observation(i);
      if (!o.candidates.empty()) targets[static_cast<std::size_t>(i)] = static_cast<std::ptrdiff_t>(o.candidates.front());
    }
    state.ResumeTiming();
    benchmark::DoNotOptimize(ep.step(targets));
  }
}
BENCHMARK(BM_EpisodeStep)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PolicyForward(benchmark::State& state) {
  const PolicyNet net = PolicyNet::initialize(PolicyShape{}, 1);
  std::mt19937_64 rng(2);
  const GraphInput in = random_graph_input(rng, static_cast<int>(state.range(0)), AugmentedNode::kFeatureCount, net.shape.k);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(net, in));
}
BENCHMARK(BM_PolicyForward)->Arg(32)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
