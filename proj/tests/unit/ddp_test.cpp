#include <gtest/gtest.h>

#include <cmath>

#include "ddpen/ddp/costs.hpp"
#include "ddpen/ddp/optimizer.hpp"
#include "ddpen/grid/shapes.hpp"
#include "ddpen/subgoal/providers.hpp"
#include "oracles.hpp"

namespace ddpen::ddp {
namespace {

using grid::CostMap;
using grid::DistanceField;

// U of three walls opening toward -x, between the map center and a goal at
// (4.9, 0). Interior: x in [1.0, 2.75], |y| < 1.
struct Pocket {
  CostMap map = CostMap::make_default();
  DistanceField field;
  Point2 goal{4.9, 0.0};

  Pocket() : field(grid::distance_field(map)) {
    grid::rasterize(map, grid::Shape::box({3.0, 0.0}, 0.0, 0.5, 3.0));
    grid::rasterize(map, grid::Shape::box({2.125, 1.25}, 0.0, 2.25, 0.5));
    grid::rasterize(map, grid::Shape::box({2.125, -1.25}, 0.0, 2.25, 0.5));
    field = grid::distance_field(map);
  }
  static bool inside(const Point2& p) {
    return p.x() > 1.0 && p.x() < 2.75 && std::abs(p.y()) < 1.0;
  }
};

OptimizerSettings iterations(int n) {
  OptimizerSettings s;
  s.max_iterations = n;
  return s;
}

TEST(CostControl, Examples) {
  EXPECT_EQ(cost_control({0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(cost_control({1.0, 0.5}), 1.25);
  EXPECT_DOUBLE_EQ(cost_control({2.0, 1.0}), 4.0 * cost_control({1.0, 0.5}));
}

TEST(CostGoal, Examples) {
  EXPECT_EQ(cost_goal({1.0, 2.0}, {1.0, 2.0}), 0.0);
  EXPECT_DOUBLE_EQ(cost_goal({0.0, 0.0}, {3.0, 4.0}), 5.0);
  EXPECT_EQ(cost_goal({0.3, -1.0}, {2.0, 7.0}), cost_goal({2.0, 7.0}, {0.3, -1.0}));
}

TEST(CostObstacle, ExamplesOnFieldGeometry) {
  CostMap map = CostMap::make_default();
  map.set(map.center_cell(), 1.0);
  const DistanceField field = grid::distance_field(map);
  const Point2 c = map.cell_to_world(map.center_cell());
  EXPECT_EQ(cost_obstacle(c + Point2(1.5, 0.0), field, 1.0), 0.0);
  EXPECT_NEAR(cost_obstacle(c + Point2(0.4, 0.0), field, 1.0), 0.6, 1e-12);
  EXPECT_DOUBLE_EQ(cost_obstacle(c, field, 1.0), 1.0);
  EXPECT_EQ(cost_obstacle(Point2(50.0, 0.0), field, 1.0), 0.0);
}

TEST(CostObstacle, SupportAndMonotonicity) {
  CostMap map = CostMap::make_default();
  map.set(map.center_cell(), 1.0);
  const DistanceField field = grid::distance_field(map);
  const Point2 c = map.cell_to_world(map.center_cell());
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 60; ++k) {
    const Point2 p = c + Point2(0.025 * k, 0.0);
    const double v = cost_obstacle(p, field, 1.0);
    if (field.sample(p) >= 1.0) {
      EXPECT_EQ(v, 0.0);
    }
    EXPECT_LE(v, last);
    last = v;
  }
}

TEST(CostSubgoal, Examples) {
  const Point2 sg(0.0, 2.0);
  EXPECT_EQ(cost_subgoal(sg, &sg), 0.0);
  EXPECT_DOUBLE_EQ(cost_subgoal({0.0, 0.0}, &sg), 2.0);
  EXPECT_EQ(cost_subgoal({0.0, 0.0}, nullptr), 0.0);
}

TEST(RunningCost, ZeroWeightsAndAtGoal) {
  OptimizeContext ctx;
  ctx.params.w_control = ctx.params.w_goal = ctx.params.w_obstacle = ctx.params.w_subgoal = 0.0;
  EXPECT_EQ(running_cost({1.0, 2.0, 0.0}, {1.0, 0.2}, ctx), 0.0);
  OptimizeContext free;
  free.goal = {1.0, -1.0};
  EXPECT_EQ(running_cost({1.0, -1.0, 0.4}, {0.0, 0.0}, free), 0.0);
}

TEST(RunningCost, UnitWeightsSumTheTerms) {
  CostMap map = CostMap::make_default();
  map.set(map.center_cell(), 1.0);
  const DistanceField field = grid::distance_field(map);
  OptimizeContext ctx;
  ctx.field = &field;
  ctx.params = {1.0, 1.0, 1.0, 1.0, 1.0};
  const Point2 c = map.cell_to_world(map.center_cell());
  ctx.goal = c + Point2(3.4, 4.0);
  ctx.subgoals = {c + Point2(0.4, 2.0)};
  const State s{c.x() + 0.4, c.y(), 0.0};
  const Control u{1.0, 0.5};
  // 1.25 (control) + 5 (goal) + 0.6 (obstacle) + 2 (sub-goal)
  EXPECT_NEAR(running_cost(s, u, ctx), 8.85, 1e-12);
  // Terminal cost drops the control and sub-goal terms.
  EXPECT_NEAR(terminal_cost(s, ctx), 5.6, 1e-12);
}

TEST(RunningCost, ZeroSubgoalWeightIsVanilla) {
  const oracles::EquivalenceCheck check = oracles::check_zero_subgoal_equivalence(2000, 5);
  EXPECT_EQ(check.mismatches, 0);
}

TEST(CostDerivatives, ControlGradientExample) {
  OptimizeContext ctx;
  ctx.params.w_control = 1.0;
  ctx.params.enable_goal = false;
  const CostDerivatives d = cost_derivatives({}, {1.0, 0.5}, ctx);
  EXPECT_DOUBLE_EQ(d.lu(0), 2.0);
  EXPECT_DOUBLE_EQ(d.lu(1), 1.0);
}

TEST(CostDerivatives, HeadingComponentIsZero) {
  OptimizeContext ctx;
  ctx.goal = {3.0, -2.0};
  const CostDerivatives d = cost_derivatives({0.5, 0.5, 1.2}, {0.3, 0.1}, ctx);
  EXPECT_EQ(d.lx(2), 0.0);
}

TEST(CostDerivatives, MatchFiniteDifferences) {
  const oracles::DerivativeCheck check = oracles::check_derivatives(1000, 13, 1e-4);
  EXPECT_EQ(check.failures, 0) << check.first_failure;
}

TEST(SubgoalSchedule, SingleAndThirds) {
  OptimizeContext ctx;
  ctx.subgoals = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  EXPECT_EQ(*ctx.subgoal_for_step(0, 30), ctx.subgoals[1]);
  EXPECT_EQ(*ctx.subgoal_for_step(29, 30), ctx.subgoals[1]);
  ctx.schedule = SubgoalSchedule::kHorizonThirds;
  EXPECT_EQ(*ctx.subgoal_for_step(0, 30), ctx.subgoals[0]);
  EXPECT_EQ(*ctx.subgoal_for_step(10, 30), ctx.subgoals[1]);
  EXPECT_EQ(*ctx.subgoal_for_step(29, 30), ctx.subgoals[2]);
  ctx.params.w_subgoal = 0.0;
  EXPECT_EQ(ctx.subgoal_for_step(0, 30), nullptr);
}

TEST(CostParams, Validation) {
  CostParams p;
  p.w_goal = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.obstacle_influence = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Optimize, FreeSpaceReachesGoal) {
  OptimizeContext ctx;
  ctx.goal = {3.0, 0.0};
  const std::vector<Control> zero(50);
  const OptimizeReport r = optimize({}, zero, ctx, iterations(50));
  ASSERT_TRUE(r.ok()) << r.diagnostic;
  EXPECT_LT((r.trajectory.states.back().position() - ctx.goal).norm(), 0.2);

  // No constant control does better than the optimizer.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 30; ++i) {
    for (int j = -10; j <= 10; ++j) {
      const std::vector<Control> u(50, Control{-1.5 + 0.1 * i, 0.05 * j});
      best = std::min(best, total_cost(dynamics::rollout({}, u, 0.1), ctx));
    }
  }
  EXPECT_LE(r.final_cost(), best);
}

TEST(Optimize, OptimalInputIsFixedPoint) {
  OptimizeContext ctx;
  ctx.goal = {2.0, 1.0};
  const std::vector<Control> zero(40);
  OptimizerSettings tight = iterations(500);
  tight.relative_tolerance = 1e-12;
  const OptimizeReport first = optimize({}, zero, ctx, tight);
  const OptimizeReport again = optimize({}, first.trajectory.controls, ctx, iterations(100));
  EXPECT_LE(again.accepted, 1);
  EXPECT_LT(std::abs(again.final_cost() - first.final_cost()), 1e-6);
}

TEST(Optimize, CostNeverIncreases) {
  const oracles::DescentCheck check = oracles::check_monotone_descent(40, 3, 30);
  EXPECT_EQ(check.violations, 0) << check.first_violation;
}

TEST(Optimize, ReportShape) {
  OptimizeContext ctx;
  ctx.goal = {2.0, 0.0};
  const std::vector<Control> zero(20);
  const OptimizeReport r = optimize({}, zero, ctx, iterations(5));
  EXPECT_EQ(r.cost_trace.size(), r.iterations.size() + 1);
  EXPECT_EQ(r.regularization_trace.size(), static_cast<std::size_t>(r.epochs));
  EXPECT_LE(r.epochs, 5);
  EXPECT_EQ(r.trajectory.controls.size(), 20u);
  EXPECT_TRUE(dynamics::is_rollout_consistent(r.trajectory));
  EXPECT_THROW(optimize({}, std::vector<Control>{}, ctx), std::invalid_argument);
}

TEST(Optimize, NonFiniteStartAborts) {
  OptimizeContext ctx;
  const std::vector<Control> zero(5);
  const OptimizeReport r = optimize({std::nan(""), 0.0, 0.0}, zero, ctx);
  EXPECT_EQ(r.status, OptimizeStatus::kNonFiniteCost);
  EXPECT_FALSE(r.diagnostic.empty());
}

TEST(Optimize, TranslationEquivariance) {
  Pocket base;
  const Point2 offset(3.25, -1.5);
  CostMap moved(base.map.width(), base.map.height(), base.map.resolution(),
                base.map.origin() + offset);
  for (std::size_t i = 0; i < base.map.size(); ++i) {
    moved.set(i, base.map.at(i));
  }
  const DistanceField moved_field = grid::distance_field(moved);

  OptimizeContext a;
  a.field = &base.field;
  a.goal = base.goal;
  a.subgoals = {{0.2, -1.8}};
  OptimizeContext b = a;
  b.field = &moved_field;
  b.goal = a.goal + offset;
  b.subgoals = {a.subgoals[0] + offset};
  const std::vector<Control> zero(30);
  const OptimizeReport ra = optimize({0.0, 0.0, 0.1}, zero, a, iterations(30));
  const OptimizeReport rb = optimize({offset.x(), offset.y(), 0.1}, zero, b, iterations(30));
  ASSERT_EQ(ra.cost_trace.size(), rb.cost_trace.size());
  for (std::size_t i = 0; i < ra.cost_trace.size(); ++i) {
    EXPECT_NEAR(ra.cost_trace[i], rb.cost_trace[i], 1e-9) << i;
  }
}

TEST(Optimize, PocketTrapsVanillaButNotSubgoal) {
  Pocket pocket;
  const std::vector<Control> zero(50);

  OptimizeContext vanilla;
  vanilla.field = &pocket.field;
  vanilla.goal = pocket.goal;
  const OptimizeReport trapped = optimize({}, zero, vanilla, iterations(100));
  const Point2 end = trapped.trajectory.states.back().position();
  EXPECT_TRUE(Pocket::inside(end)) << end.transpose();
  EXPECT_GT((end - pocket.goal).norm(), 1.0);

  const subgoal::OracleProvider oracle;
  const subgoal::SubGoalPrediction sg =
      oracle.predict({grid::dilate(pocket.map, 1.5), pocket.goal});
  OptimizeContext ddpen = vanilla;
  ddpen.subgoals.assign(sg.positions.begin(), sg.positions.end());
  const OptimizeReport escaped = optimize({}, zero, ddpen, iterations(100));
  const Point2 out = escaped.trajectory.states.back().position();
  EXPECT_FALSE(Pocket::inside(out)) << out.transpose();
  for (const State& s : escaped.trajectory.states) {
    EXPECT_GT(pocket.field.sample(s.position()), 0.0);
  }
}

}  // namespace
}  // namespace ddpen::ddp
