#include <benchmark/benchmark.h>

#include "ddpen/ddp/optimizer.hpp"
#include "ddpen/grid/distance_field.hpp"
#include "ddpen/grid/map_gen.hpp"
#include "ddpen/planner/astar.hpp"
#include "ddpen/sim/local_map.hpp"
#include "ddpen/subgoal/approximator.hpp"

namespace {

using namespace ddpen;

grid::CostMap sample_map() {
  grid::MapGenParams p;
  p.seed = 42;
  return grid::generate_random_map(p);
}

void BM_DistanceField(benchmark::State& state) {
  const grid::CostMap map = sample_map();
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid::distance_field(map));
  }
}
BENCHMARK(BM_DistanceField)->Unit(benchmark::kMicrosecond);

void BM_AStarCornerToCorner(benchmark::State& state) {
  const grid::CostMap map = sample_map();
  const grid::CellIndex start = map.center_cell();
  const grid::CellIndex goal{1, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(planner::plan(map, start, goal, {}));
  }
}
BENCHMARK(BM_AStarCornerToCorner)->Unit(benchmark::kMicrosecond);

void BM_Optimize(benchmark::State& state) {
  const grid::CostMap map = sample_map();
  const grid::DistanceField field = grid::distance_field(map);
  ddp::OptimizeContext ctx;
  ctx.field = &field;
  ctx.goal = Point2(4.0, 3.0);
  if (state.range(1) != 0) {
    ctx.subgoals = {Point2(1.5, 1.0)};
  }
  const std::vector<dynamics::Control> zero(static_cast<std::size_t>(state.range(0)));
  ddp::OptimizerSettings settings;
  settings.max_iterations = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ddp::optimize({}, zero, ctx, settings));
  }
}
BENCHMARK(BM_Optimize)->Args({30, 0})->Args({30, 1})->Args({50, 1})->Unit(benchmark::kMicrosecond);

void BM_LocalCostmap(benchmark::State& state) {
  sim::World world;
  world.waypoints = {Point2(0, 0), Point2(20, 0)};
  for (int i = 0; i < 20; ++i) {
    sim::Obstacle o;
    o.center = Point2(1.0 * i, (i % 2 ? 1.5 : -1.5));
    o.size = Eigen::Vector2d(1.0, 1.0);
    world.obstacles.push_back(o);
  }
  const dynamics::State pose{5.0, 0.0, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::local_costmap(world, pose, world.cycle));
  }
}
BENCHMARK(BM_LocalCostmap)->Unit(benchmark::kMicrosecond);

void BM_LearnedInference(benchmark::State& state) {
  subgoal::Checkpoint ckpt;
  subgoal::SubGoalNet net(ckpt.config, ckpt.map_width, ckpt.map_height);
  net.initialize(1);
  ckpt.weights.assign(net.parameters().begin(), net.parameters().end());
  const subgoal::LearnedProvider provider(ckpt);
  const grid::CostMap map = sample_map();
  for (auto _ : state) {
    benchmark::DoNotOptimize(provider.predict({map, Point2(4.0, -2.0)}));
  }
}
BENCHMARK(BM_LearnedInference)->Unit(benchmark::kMicrosecond);

void BM_OracleProvider(benchmark::State& state) {
  const grid::CostMap map = sample_map();
  const subgoal::OracleProvider oracle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.predict({map, Point2(4.5, -4.5)}));
  }
}
BENCHMARK(BM_OracleProvider)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
