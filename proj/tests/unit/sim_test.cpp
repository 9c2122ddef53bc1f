#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ddpen/sim/executor.hpp"
#include "ddpen/sim/local_map.hpp"
#include "ddpen/sim/serialization.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace ddpen::sim {
namespace {

World straight_course(double length) {
  World w;
  w.name = "straight";
  w.waypoints = {Point2(0.0, 0.0), Point2(length, 0.0)};
  return w;
}

TEST(World, ParseAndValidate) {
  const World w = parse_world(R"({
    "name": "t",
    "waypoints": [[0, 0], [5, 0], [5, 5]],
    "obstacles": [{"type": "cylinder", "pose": [2, 0, 0], "size": [0.5]},
                  {"type": "box", "pose": [4, 2, 0.3], "size": [1, 2]}],
    "cycle": {"horizon": 20}
  })");
  EXPECT_EQ(w.name, "t");
  EXPECT_EQ(w.obstacles.size(), 2u);
  EXPECT_EQ(w.cycle.horizon, 20);
  EXPECT_DOUBLE_EQ(w.course_length(), 10.0);
  EXPECT_TRUE(w.collides(Point2(2.2, 0.0)));
  EXPECT_FALSE(w.collides(Point2(2.6, 0.0)));
  EXPECT_EQ(w.reversed().waypoints.front(), Point2(5.0, 5.0));
  EXPECT_EQ(parse_world(world_to_json(w)).obstacles.size(), 2u);

  EXPECT_THROW(parse_world(R"({"waypoints": [[0, 0], [0, 0]]})"), ScenarioError);
  EXPECT_THROW(parse_world(R"({"waypoints": [[0, 0]]})"), ScenarioError);
  EXPECT_THROW(parse_world(R"({"waypoints": [[0, 0], [1, 0]],
                               "obstacles": [{"type": "cone", "pose": [0, 0], "size": [1]}]})"),
               ScenarioError);
  EXPECT_THROW(parse_world("{not json"), ScenarioError);
  EXPECT_THROW(load_world("/nonexistent/world.json"), ScenarioError);
}

TEST(World, ShippedScenariosLoad) {
  for (const char* name : {"free", "cylinders", "cubes_convex", "cubes_nonconvex"}) {
    const World w = load_world(std::string(DDPEN_SCENARIO_DIR) + "/" + name + ".json");
    EXPECT_EQ(w.name, name);
    EXPECT_GT(w.course_length(), 250.0);
    for (const Point2& p : w.waypoints) {
      EXPECT_FALSE(w.collides(p)) << name;
    }
  }
}

TEST(CycleConfig, RejectsNonsense) {
  CycleConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(c.cycle_period(), 0.3);
  c.executor_rate = 0.0;
  EXPECT_THROW(c.validate(), ScenarioError);
  c = {};
  c.epoch_budget = 1e-7;
  EXPECT_THROW(c.validate(), ScenarioError);
  c = {};
  c.inflation = -1.0;
  EXPECT_THROW(c.validate(), ScenarioError);
}

TEST(StartPose, SeededAndBounded) {
  const World w = straight_course(10.0);
  const auto a = start_pose(w, 3, true);
  const auto b = start_pose(w, 3, true);
  EXPECT_EQ(a, b);
  EXPECT_LE(std::abs(a.y), w.cycle.perturb_lateral + 1e-12);
  EXPECT_LE(std::abs(a.heading), w.cycle.perturb_heading + 1e-12);
  EXPECT_NE(start_pose(w, 4, true), a);
  const auto exact = start_pose(w, 3, false);
  EXPECT_EQ(exact, (dynamics::State{0.0, 0.0, 0.0}));
}

TEST(Shift, DropsExecutedStepsAndRepeatsLast) {
  std::vector<dynamics::Control> u;
  for (int i = 0; i < 10; ++i) {
    u.push_back({1.0, 0.05 * i});
  }
  const auto t = dynamics::rollout({}, u, 0.1);
  const auto s = shift_trajectory(t, 3);
  ASSERT_EQ(s.controls.size(), 10u);
  EXPECT_EQ(s.states.front(), t.states[3]);
  EXPECT_EQ(s.controls[0], t.controls[3]);
  EXPECT_EQ(s.controls.back(), t.controls.back());
  EXPECT_EQ(s.controls[7], t.controls.back());
  EXPECT_TRUE(dynamics::is_rollout_consistent(s));
  // Shifting by nothing reproduces the trajectory.
  EXPECT_EQ(shift_trajectory(t, 0).states, t.states);
  // Past the end everything is the last control.
  const auto all = shift_trajectory(t, 25);
  EXPECT_EQ(all.states.front(), t.states.back());
  EXPECT_THROW(shift_trajectory(dynamics::Trajectory{}, 1), std::invalid_argument);
}

TEST(LocalMap, CenteredOnRobotWithObstacles) {
  World w = straight_course(10.0);
  Obstacle o;
  o.type = Obstacle::Type::kCylinder;
  o.center = Point2(3.0, 0.0);
  o.size = Eigen::Vector2d(0.5, 0.5);
  w.obstacles.push_back(o);
  const dynamics::State pose{1.23, -0.4, 0.7};
  const grid::CostMap map = local_costmap(w, pose, w.cycle);
  EXPECT_EQ(map.width(), w.cycle.map_cells);
  EXPECT_EQ(map.world_to_cell(pose.position()), map.center_cell());
  EXPECT_TRUE(map.is_lethal(map.clamp_to_cell(Point2(3.0, 0.0))));
  EXPECT_FALSE(map.is_lethal(map.clamp_to_cell(Point2(1.0, 0.0))));
  // Inflation leaves a soft band just outside the cylinder.
  const double band = map.at(map.clamp_to_cell(Point2(3.8, 0.0)));
  EXPECT_GT(band, 0.0);
  EXPECT_LT(band, 1.0);
}

TEST(ProjectGoal, Cases) {
  const grid::CostMap map(200, 200, 0.05, Point2(-5.0, -5.0));
  const GoalProjection inside = project_goal({0, 0}, {2, 1}, {0, 0}, map);
  EXPECT_TRUE(inside.waypoint_inside);
  EXPECT_EQ(inside.point, Point2(2.0, 1.0));

  const GoalProjection out = project_goal({-20, 1}, {20, 1}, {0, 0}, map);
  EXPECT_FALSE(out.waypoint_inside);
  EXPECT_FALSE(out.degenerate);
  EXPECT_NEAR(out.point.x(), 5.0, 1e-12);
  EXPECT_NEAR(out.point.y(), 1.0, 1e-12);

  // Course line misses the map entirely: ray toward the waypoint instead.
  const GoalProjection miss = project_goal({-20, 30}, {20, 30}, {0, 0}, map);
  EXPECT_TRUE(miss.degenerate);
  EXPECT_NEAR(miss.point.x(), (5.0 / 30.0) * 20.0, 1e-9);
  EXPECT_NEAR(miss.point.y(), 5.0, 1e-12);

  const GoalProjection same = project_goal({20, 0}, {20, 0}, {0, 0}, map);
  EXPECT_TRUE(same.degenerate);
  EXPECT_NEAR(same.point.x(), 5.0, 1e-12);
}

TEST(Execute, FreeStraightCourse) {
  const World w = straight_course(10.0);
  SimConfig cfg;
  cfg.mode = ControllerMode::kDdp;
  const RunResult r = execute(w, cfg);
  ASSERT_TRUE(r.completed) << to_string(r.failure);
  // 10 m at 1.5 m/s plus the first optimizer cycle and the final approach.
  EXPECT_GT(r.elapsed, 10.0 / 1.5);
  EXPECT_LT(r.elapsed, 9.0);
  EXPECT_EQ(r.waypoints_reached, 1u);
  EXPECT_LT((r.path.back().pose.position() - w.waypoints.back()).norm(),
            w.cycle.final_tolerance);
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    ASSERT_GT(r.path[i].t, r.path[i - 1].t);
  }
}

TEST(Execute, DeterministicPerSeed) {
  const World w = straight_course(6.0);
  SimConfig cfg;
  cfg.seed = 5;
  const subgoal::OracleProvider oracle;
  const RunResult a = execute(w, cfg, &oracle);
  const RunResult b = execute(w, cfg, &oracle);
  EXPECT_EQ(run_result_to_json(a, true), run_result_to_json(b, true));
  EXPECT_TRUE(a.completed);
}

TEST(Execute, SteadyProgressIsNotAStall) {
  // One 20 m leg takes ~14 s, far longer than the timeout, but the robot
  // keeps closing in on the waypoint.
  World w = straight_course(20.0);
  w.cycle.stall_timeout = 5.0;
  SimConfig cfg;
  cfg.mode = ControllerMode::kDdp;
  const RunResult r = execute(w, cfg);
  EXPECT_TRUE(r.completed) << to_string(r.failure);
  EXPECT_GT(r.elapsed, 5.0);
}

TEST(Execute, DdpenNeedsProvider) {
  SimConfig cfg;
  cfg.mode = ControllerMode::kDdpen;
  EXPECT_THROW(execute(straight_course(5.0), cfg), std::invalid_argument);
}

TEST(Execute, VanillaStallsInNonconvexPocket) {
  const World w = load_world(std::string(DDPEN_SCENARIO_DIR) + "/cubes_nonconvex.json");
  SimConfig cfg;
  cfg.mode = ControllerMode::kDdp;
  const RunResult r = execute(w, cfg);
  EXPECT_FALSE(r.completed);
  EXPECT_EQ(r.failure, FailureReason::kStallLocalMinimum);
  for (const PoseSample& p : r.path) {
    ASSERT_FALSE(w.collides(p.pose.position()));
  }
}

TEST(Serialization, JsonAndCsv) {
  SimConfig cfg;
  cfg.mode = ControllerMode::kDdp;
  cfg.record_cycles = true;
  const RunResult r = execute(straight_course(3.0), cfg);
  const auto j = nlohmann::json::parse(run_result_to_json(r, true));
  EXPECT_EQ(j.at("mode"), "ddp");
  EXPECT_EQ(j.at("provider"), "none");
  EXPECT_EQ(j.at("completed"), r.completed);
  EXPECT_EQ(j.at("path").size(), r.path.size());
  EXPECT_EQ(j.at("cycles_trace").size(), r.trace.size());

  std::ostringstream csv;
  write_path_csv(csv, r);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,y,heading");

  test::TempDir dir;
  save_run(r, dir.path());
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "result.json"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "path.csv"));
}

TEST(Mode, Parse) {
  EXPECT_EQ(parse_mode("ddp"), ControllerMode::kDdp);
  EXPECT_EQ(to_string(parse_mode("ddpen")), "ddpen");
  EXPECT_THROW(parse_mode("mpc"), std::invalid_argument);
  EXPECT_EQ(to_string(FailureReason::kStallLocalMinimum), "stall-local-minimum");
}

}  // namespace
}  // namespace ddpen::sim
