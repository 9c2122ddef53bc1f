#include "ddpen/sim/executor.hpp"

#include <cmath>
#include <stdexcept>

#include "ddpen/grid/distance_field.hpp"
#include "ddpen/sim/local_map.hpp"

namespace ddpen::sim {
namespace {

using Micros = std::int64_t;

Micros to_micros(double seconds) { return std::llround(seconds * 1e6); }
double to_seconds(Micros us) { return static_cast<double>(us) * 1e-6; }

bool finite(const dynamics::State& s) {
  return std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.heading);
}

// Control at time `offset` after the trajectory start, linear between
// prediction steps. Past the end the robot stops.
dynamics::Control control_at(const dynamics::Trajectory& traj, Micros offset) {
  const Micros step_us = to_micros(traj.dt);
  const auto k = static_cast<std::size_t>(offset / step_us);
  const std::size_t n = traj.controls.size();
  if (k >= n) {
    return {};
  }
  const double frac = static_cast<double>(offset % step_us) / static_cast<double>(step_us);
  const dynamics::Control& a = traj.controls[k];
  if (frac == 0.0 || k + 1 >= n) {
    return a;
  }
  const dynamics::Control& b = traj.controls[k + 1];
  return {a.v + frac * (b.v - a.v), a.omega + frac * (b.omega - a.omega)};
}

}  // namespace

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kStallLocalMinimum:
      return "stall-local-minimum";
    case FailureReason::kCollision:
      return "collision";
    case FailureReason::kDivergence:
      return "divergence";
  }
  return "unknown";
}

dynamics::State start_pose(const World& world, std::uint64_t seed, bool perturb) {
  const Point2 a = world.waypoints.at(0);
  const Point2 dir = (world.waypoints.at(1) - a).normalized();
  dynamics::State s{a.x(), a.y(), std::atan2(dir.y(), dir.x())};
  if (perturb) {
    Rng rng(derive_seed(seed, 0x5eed));
    const double lateral = rng.uniform(-1.0, 1.0) * world.cycle.perturb_lateral;
    const double heading = rng.uniform(-1.0, 1.0) * world.cycle.perturb_heading;
    s.x += -dir.y() * lateral;
    s.y += dir.x() * lateral;
    s.heading = normalize_angle(s.heading + heading);
  }
  return s;
}

RunResult execute(const World& world, const SimConfig& config,
                  const subgoal::SubGoalProvider* provider) {
  world.validate();
  const CycleConfig& cfg = world.cycle;
  if (config.mode == ControllerMode::kDdpen && provider == nullptr) {
    throw std::invalid_argument("execute: DDPEN mode needs a sub-goal provider");
  }

  RunResult result;
  result.scenario = world.name;
  result.config = config;
  result.cycle = cfg;
  result.start = start_pose(world, config.seed, config.perturb);

  const Micros tick_us = to_micros(1.0 / cfg.executor_rate);
  const Micros cycle_us = cfg.epochs_per_cycle * to_micros(cfg.epoch_budget);
  const Micros step_us = to_micros(cfg.dt);
  const Micros stall_us = to_micros(cfg.stall_timeout);

  dynamics::State pose = result.start;
  result.path.push_back({0.0, pose});
  std::size_t next_wp = 1;
  Micros last_progress = 0;
  double best_distance = (pose.position() - world.waypoints[next_wp]).norm();

  std::optional<dynamics::Trajectory> active;
  Micros active_t0 = 0;
  std::optional<dynamics::Trajectory> pending;
  Micros pending_commit = 0;

  // Start a cycle at `now`; it commits at now + cycle_us. The trajectory is
  // planned from the state the active commit predicts for that instant.
  auto start_cycle = [&](Micros now) {
    const grid::CostMap map = local_costmap(world, pose, cfg);
    const grid::DistanceField field = grid::distance_field(map);
    const GoalProjection goal = project_goal(world.waypoints[next_wp - 1],
                                             world.waypoints[next_wp], pose.position(), map);
    result.degenerate_goals += goal.degenerate ? 1 : 0;
    const Micros commit = now + cycle_us;
    CycleInput input{map, field, goal.point, pose, nullptr, 0};
    if (active) {
      input.previous = &*active;
      input.elapsed_steps = static_cast<std::size_t>((commit - active_t0) / step_us);
    }
    CycleResult cycle = run_cycle(input, config.mode, provider, cfg);
    ++result.cycles;
    if (cycle.subgoals && cycle.subgoals->degraded) {
      ++result.degraded_subgoals;
    }
    if (!cycle.committed) {
      ++result.optimizer_errors;
    }
    if (config.record_cycles) {
      CycleTrace tr;
      tr.t = to_seconds(now);
      tr.pose = pose;
      tr.goal = goal.point;
      if (cycle.subgoals) {
        tr.subgoals.assign(cycle.subgoals->positions.begin(), cycle.subgoals->positions.end());
      }
      tr.plan_start = cycle.report.trajectory.states.front();
      tr.plan_end = cycle.report.trajectory.states.back();
      tr.cost = cycle.report.final_cost();
      tr.status = ddp::to_string(cycle.report.status);
      result.trace.push_back(std::move(tr));
    }
    pending = std::move(cycle.committed);
    pending_commit = commit;
  };

  start_cycle(0);
  Micros next_commit = cycle_us;
  Micros next_tick = cycle_us;  // first tick at the first commit

  auto finish = [&](Micros now, FailureReason reason) {
    result.elapsed = to_seconds(now);
    result.failure = reason;
    result.completed = reason == FailureReason::kNone;
    return result;
  };

  while (true) {
    const Micros now = std::min(next_commit, next_tick);
    if (now == next_commit) {
      if (pending) {
        active = std::move(pending);
        active_t0 = pending_commit;
        pending.reset();
      }
      start_cycle(now);
      next_commit = now + cycle_us;
    }
    if (now == next_tick) {
      const dynamics::Control u =
          active ? control_at(*active, now - active_t0) : dynamics::Control{};
      try {
        pose = dynamics::step(pose, u, to_seconds(tick_us), cfg.limits);
      } catch (const dynamics::DynamicsError&) {
        return finish(now + tick_us, FailureReason::kDivergence);
      }
      const Micros t = now + tick_us;
      result.path.push_back({to_seconds(t), pose});
      next_tick = t;
      if (!finite(pose) || !world.bounds.contains(pose.position())) {
        return finish(t, FailureReason::kDivergence);
      }
      if (world.collides(pose.position())) {
        return finish(t, FailureReason::kCollision);
      }
      const bool last = next_wp + 1 == world.waypoints.size();
      const double radius = last ? cfg.final_tolerance : cfg.arrival_radius;
      const double distance = (pose.position() - world.waypoints[next_wp]).norm();
      if (distance <= radius) {
        ++result.waypoints_reached;
        last_progress = t;
        if (last) {
          return finish(t, FailureReason::kNone);
        }
        ++next_wp;
        best_distance = (pose.position() - world.waypoints[next_wp]).norm();
      } else if (distance < best_distance - cfg.progress_margin) {
        best_distance = distance;
        last_progress = t;
      }
      if (t - last_progress >= stall_us) {
        return finish(t, FailureReason::kStallLocalMinimum);
      }
    }
  }
}

}  // namespace ddpen::sim
