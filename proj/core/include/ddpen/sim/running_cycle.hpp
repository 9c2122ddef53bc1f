#pragma once

#include <optional>
#include <string_view>

#include "ddpen/ddp/optimizer.hpp"
#include "ddpen/grid/distance_field.hpp"
#include "ddpen/subgoal/providers.hpp"
#include "ddpen/sim/world.hpp"

namespace ddpen::sim {

enum class ControllerMode { kDdp, kDdpen };

ControllerMode parse_mode(std::string_view name);
std::string_view to_string(ControllerMode mode);

/// Drops the first `elapsed` steps and refills the horizon by repeating the
/// last control. The result is re-rolled from previous.states[elapsed].
dynamics::Trajectory shift_trajectory(const dynamics::Trajectory& previous, std::size_t elapsed,
                                      const dynamics::ControlLimits& limits = {});

struct CycleInput {
  const grid::CostMap& map;
  const grid::DistanceField& field;
  Point2 goal;
  /// Start state used when there is no previous trajectory.
  dynamics::State start;
  /// Last committed trajectory, if any, and how many of its steps will have
  /// been executed by the time this cycle commits.
  const dynamics::Trajectory* previous = nullptr;
  std::size_t elapsed_steps = 0;
};

struct CycleResult {
  /// Empty when the optimizer aborted; the previous commit stays active.
  std::optional<dynamics::Trajectory> committed;
  dynamics::Trajectory warm_start;
  ddp::OptimizeReport report;
  std::optional<subgoal::SubGoalPrediction> subgoals;
};

/// One receding-horizon cycle: warm start, one provider query in DDPEN mode,
/// epochs_per_cycle optimizer iterations.
CycleResult run_cycle(const CycleInput& input, ControllerMode mode,
                      const subgoal::SubGoalProvider* provider, const CycleConfig& cfg);

}  // namespace ddpen::sim
