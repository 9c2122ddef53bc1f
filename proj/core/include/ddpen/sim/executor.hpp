#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddpen/sim/running_cycle.hpp"

namespace ddpen::sim {

enum class FailureReason { kNone, kStallLocalMinimum, kCollision, kDivergence };

std::string_view to_string(FailureReason reason);

struct PoseSample {
  double t = 0.0;
  dynamics::State pose;
};

struct SimConfig {
  ControllerMode mode = ControllerMode::kDdpen;
  /// Tag recorded in the result; the provider itself is passed to execute().
  std::string provider = "oracle";
  std::uint64_t seed = 0;
  bool perturb = true;
  /// Keep a per-cycle trace in the result.
  bool record_cycles = false;
};

struct CycleTrace {
  double t = 0.0;
  dynamics::State pose;
  Point2 goal = Point2::Zero();
  std::vector<Point2> subgoals;
  /// First state of the planned trajectory and its end point.
  dynamics::State plan_start;
  dynamics::State plan_end;
  double cost = 0.0;
  std::string status;
};

struct RunResult {
  bool completed = false;
  double elapsed = 0.0;
  std::vector<PoseSample> path;
  FailureReason failure = FailureReason::kNone;

  // Snapshot of what produced the run.
  std::string scenario;
  SimConfig config;
  CycleConfig cycle;
  dynamics::State start;

  std::size_t waypoints_reached = 0;
  std::size_t cycles = 0;
  std::size_t optimizer_errors = 0;
  std::size_t degraded_subgoals = 0;
  std::size_t degenerate_goals = 0;
  std::vector<CycleTrace> trace;
};

/// Seeded start pose: first waypoint facing the first segment, shifted
/// sideways and rotated by at most the configured perturbation.
dynamics::State start_pose(const World& world, std::uint64_t seed, bool perturb);

/// Simulated-time loop. The optimizer is charged epochs_per_cycle *
/// epoch_budget per cycle and commits at the end of it; the executor ticks
/// at executor_rate from the first commit on. At equal timestamps the order
/// is commit, start of the next cycle, executor tick.
/// `provider` is required in DDPEN mode.
RunResult execute(const World& world, const SimConfig& config,
                  const subgoal::SubGoalProvider* provider = nullptr);

}  // namespace ddpen::sim
