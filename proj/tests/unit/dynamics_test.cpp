#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ddpen/dynamics/unicycle.hpp"
#include "oracles.hpp"

namespace ddpen::dynamics {
namespace {

TEST(Step, StraightMotion) {
  const State s = step({0.0, 0.0, 0.0}, {1.0, 0.0}, 0.1);
  EXPECT_DOUBLE_EQ(s.x, 0.1);
  EXPECT_DOUBLE_EQ(s.y, 0.0);
  EXPECT_DOUBLE_EQ(s.heading, 0.0);
}

TEST(Step, AlongY) {
  const double half_pi = std::numbers::pi / 2;
  const State s = step({0.0, 0.0, half_pi}, {1.0, 0.0}, 0.1);
  EXPECT_NEAR(s.x, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.y, 0.1);
  EXPECT_DOUBLE_EQ(s.heading, half_pi);
}

TEST(Step, VelocityClamped) {
  const State s = step({0.0, 0.0, 0.0}, {2.5, 0.0}, 0.1);
  EXPECT_NEAR(s.x, 0.15, 1e-15);
  const State r = step({0.0, 0.0, 0.0}, {0.0, 3.0}, 0.1);
  EXPECT_NEAR(r.heading, 0.05, 1e-15);
}

TEST(Step, HeadingStaysNormalized) {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const State s = step({0.0, 0.0, rng.uniform(-3.2, 3.2)}, {1.0, rng.uniform(-0.5, 0.5)}, 0.5);
    ASSERT_GT(s.heading, -std::numbers::pi);
    ASSERT_LE(s.heading, std::numbers::pi);
  }
  EXPECT_DOUBLE_EQ(normalize_angle(-std::numbers::pi), std::numbers::pi);
}

TEST(Step, RejectsBadInput) {
  EXPECT_THROW(step({}, {1.0, 0.0}, 0.0), DynamicsError);
  EXPECT_THROW(step({std::nan(""), 0.0, 0.0}, {1.0, 0.0}, 0.1), DynamicsError);
  EXPECT_THROW(step({}, {INFINITY, 0.0}, 0.1), DynamicsError);
}

TEST(Clamp, Idempotent) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Control u{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    EXPECT_EQ(clamp(clamp(u)), clamp(u));
  }
}

TEST(Rollout, ZeroControlsStayPut) {
  const State s0{1.0, 2.0, 0.3};
  const std::vector<Control> u(20);
  const Trajectory t = rollout(s0, u, 0.1);
  ASSERT_EQ(t.states.size(), 21u);
  for (const State& s : t.states) {
    EXPECT_EQ(s, s0);
  }
}

TEST(Rollout, ConstantForward) {
  const std::vector<Control> u(10, Control{1.5, 0.0});
  const Trajectory t = rollout({}, u, 0.1);
  EXPECT_NEAR(t.states.back().x, 1.5, 1e-12);
}

TEST(Rollout, FullCircleReturnsNearStart) {
  const std::vector<Control> u(126, Control{1.0, 0.5});
  const Trajectory t = rollout({}, u, 0.1);
  EXPECT_LT(t.states.back().position().norm(), 0.05);
  double max_y = 0.0;
  for (const State& s : t.states) {
    max_y = std::max(max_y, s.y);
  }
  EXPECT_NEAR(max_y, 4.0, 0.05);
}

TEST(Rollout, ConsistencyAndStoredControlsAreClamped) {
  Rng rng(2);
  std::vector<Control> u;
  for (int i = 0; i < 50; ++i) {
    u.push_back({rng.uniform(-3, 3), rng.uniform(-2, 2)});
  }
  const Trajectory t = rollout({0.5, -0.5, 1.0}, u, 0.1);
  EXPECT_TRUE(is_rollout_consistent(t));
  for (const Control& c : t.controls) {
    EXPECT_LE(std::abs(c.v), 1.5);
    EXPECT_LE(std::abs(c.omega), 0.5);
  }
  EXPECT_THROW(rollout({}, std::vector<Control>{}, 0.1), DynamicsError);
}

TEST(Linearize, RestPoint) {
  const Linearization lin = linearize({}, {}, 0.1);
  EXPECT_EQ(lin.A, StateMatrix::Identity());
  EXPECT_DOUBLE_EQ(lin.B(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(lin.B(2, 1), 0.1);
}

TEST(Linearize, HeadingQuarterTurn) {
  const Linearization lin = linearize({0.0, 0.0, std::numbers::pi / 2}, {1.0, 0.0}, 0.1);
  EXPECT_DOUBLE_EQ(lin.A(0, 2), -0.1);
  EXPECT_NEAR(lin.A(1, 2), 0.0, 1e-15);
}

TEST(Linearize, MatchesFiniteDifferences) {
  const oracles::DerivativeCheck check = oracles::check_derivatives(1000, 77, 1e-4);
  EXPECT_EQ(check.failures, 0) << check.first_failure;
  EXPECT_LT(check.max_dynamics_error, 1e-5);
}

TEST(TrajectoryCsv, Columns) {
  const std::vector<Control> u(2, Control{1.0, 0.1});
  const Trajectory t = rollout({}, u, 0.1);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,x,y,heading,v,omega");
  int rows = 0;
  std::string last;
  while (std::getline(is, line)) {
    ++rows;
    last = line;
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(last.back(), ',');
}

}  // namespace
}  // namespace ddpen::dynamics
