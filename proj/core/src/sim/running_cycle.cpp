#include "ddpen/sim/running_cycle.hpp"

#include <stdexcept>
#include <string>

namespace ddpen::sim {

ControllerMode parse_mode(std::string_view name) {
  if (name == "ddp") {
    return ControllerMode::kDdp;
  }
  if (name == "ddpen") {
    return ControllerMode::kDdpen;
  }
  throw std::invalid_argument("unknown controller mode '" + std::string(name) + "'");
}

std::string_view to_string(ControllerMode mode) {
  return mode == ControllerMode::kDdp ? "ddp" : "ddpen";
}

dynamics::Trajectory shift_trajectory(const dynamics::Trajectory& previous, std::size_t elapsed,
                                      const dynamics::ControlLimits& limits) {
  const std::size_t n = previous.controls.size();
  if (n == 0) {
    throw std::invalid_argument("shift_trajectory: empty trajectory");
  }
  const std::size_t k = std::min(elapsed, n);
  std::vector<dynamics::Control> controls(previous.controls.begin() + static_cast<std::ptrdiff_t>(k),
                                          previous.controls.end());
  controls.resize(n, previous.controls.back());
  return dynamics::rollout(previous.states[k], controls, previous.dt, limits);
}

CycleResult run_cycle(const CycleInput& input, ControllerMode mode,
                      const subgoal::SubGoalProvider* provider, const CycleConfig& cfg) {
  CycleResult out;
  const auto n = static_cast<std::size_t>(cfg.horizon);
  if (input.previous != nullptr && input.previous->controls.size() == n) {
    out.warm_start = shift_trajectory(*input.previous, input.elapsed_steps, cfg.limits);
  } else {
    const std::vector<dynamics::Control> zeros(n);
    out.warm_start = dynamics::rollout(input.start, zeros, cfg.dt, cfg.limits);
  }

  ddp::OptimizeContext ctx;
  ctx.field = &input.field;
  ctx.goal = input.goal;
  ctx.schedule = cfg.schedule;
  ctx.params = cfg.costs;
  if (mode == ControllerMode::kDdpen) {
    if (provider == nullptr) {
      throw std::invalid_argument("run_cycle: DDPEN mode needs a sub-goal provider");
    }
    out.subgoals = provider->predict({input.map, input.goal});
    ctx.subgoals.assign(out.subgoals->positions.begin(), out.subgoals->positions.end());
  }

  ddp::OptimizerSettings settings;
  settings.max_iterations = cfg.epochs_per_cycle;
  settings.dt = cfg.dt;
  settings.limits = cfg.limits;
  out.report = ddp::optimize(out.warm_start.states.front(), out.warm_start.controls, ctx, settings);
  if (out.report.ok()) {
    out.committed = out.report.trajectory;
  }
  return out;
}

}  // namespace ddpen::sim
