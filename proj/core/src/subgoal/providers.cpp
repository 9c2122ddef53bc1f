#include "ddpen/subgoal/providers.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>

#include "ddpen/subgoal/approximator.hpp"

namespace ddpen::subgoal {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::array<Point2, 3> to_array(const std::vector<Point2>& v) {
  std::array<Point2, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = v.at(std::min(i, v.size() - 1));
  }
  return out;
}

}  // namespace

Point2 clip_to_extent(const grid::CostMap& map, const Point2& p) {
  const Point2& o = map.origin();
  return {std::clamp(p.x(), o.x(), o.x() + map.extent_x()),
          std::clamp(p.y(), o.y(), o.y() + map.extent_y())};
}

OracleProvider::OracleProvider(planner::PlannerParams params, std::vector<int> steps,
                               GoalFallback fallback, int ring_width)
    : params_(params), steps_(std::move(steps)), fallback_(fallback), ring_width_(ring_width) {
  if (steps_.size() != 3) {
    throw std::invalid_argument("OracleProvider: exactly three sub-goal steps required");
  }
}

SubGoalPrediction OracleProvider::predict(const SubGoalQuery& query) const {
  const auto t0 = Clock::now();
  const grid::CostMap& map = query.map;
  const grid::CellIndex start = map.center_cell();
  if (map.is_lethal(start)) {
    throw std::invalid_argument("OracleProvider: map center is lethal");
  }
  std::optional<planner::GridPath> path;
  const grid::CellIndex goal_cell = map.clamp_to_cell(query.goal);
  if (!map.is_lethal(goal_cell)) {
    path = planner::plan(map, start, goal_cell, params_);
  }
  if (!path) {
    // Nearest reachable cell to the goal, ties to the lowest index.
    const std::vector<bool> reachable = planner::reachable_mask(map, start);
    auto nearest = [&](auto&& admissible) -> std::optional<std::size_t> {
      double best = std::numeric_limits<double>::infinity();
      std::optional<std::size_t> best_index;
      for (std::size_t i = 0; i < map.size(); ++i) {
        if (!reachable[i] || !admissible(map.cell_of(i))) {
          continue;
        }
        const double d = (map.cell_to_world(map.cell_of(i)) - query.goal).squaredNorm();
        if (d < best) {
          best = d;
          best_index = i;
        }
      }
      return best_index;
    };
    std::optional<std::size_t> target;
    if (fallback_ == GoalFallback::kBorderRing) {
      target = nearest([&](grid::CellIndex c) {
        return c.x < ring_width_ || c.y < ring_width_ || c.x >= map.width() - ring_width_ ||
               c.y >= map.height() - ring_width_;
      });
    }
    if (!target) {
      target = nearest([](grid::CellIndex) { return true; });
    }
    path = planner::plan(map, start, map.cell_of(target.value_or(map.index(start))), params_);
  }
  SubGoalPrediction out;
  out.provider = name();
  if (path) {
    out.positions = to_array(planner::extract_subgoals(*path, steps_, map).positions);
  } else {
    out.positions = BaselineProvider(steps_).points(map, query.goal);
    out.degraded = true;
  }
  out.latency_s = seconds_since(t0);
  return out;
}

BaselineProvider::BaselineProvider(std::vector<int> steps) : steps_(std::move(steps)) {
  if (steps_.size() != 3) {
    throw std::invalid_argument("BaselineProvider: exactly three sub-goal steps required");
  }
}

std::array<Point2, 3> BaselineProvider::points(const grid::CostMap& map,
                                               const Point2& goal) const {
  const Point2 center = map.center();
  const Eigen::Vector2d ray = goal - center;
  const double length = ray.norm();
  std::array<Point2, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    if (length == 0.0) {
      out[i] = center;
      continue;
    }
    const double along = std::min(steps_[i] * map.resolution(), length);
    out[i] = clip_to_extent(map, center + ray * (along / length));
  }
  return out;
}

SubGoalPrediction BaselineProvider::predict(const SubGoalQuery& query) const {
  const auto t0 = Clock::now();
  SubGoalPrediction out;
  out.provider = name();
  out.positions = points(query.map, query.goal);
  out.latency_s = seconds_since(t0);
  return out;
}

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "oracle") {
    return ProviderKind::kOracle;
  }
  if (name == "baseline") {
    return ProviderKind::kBaseline;
  }
  if (name == "learned") {
    return ProviderKind::kLearned;
  }
  throw std::invalid_argument("unknown provider '" + std::string(name) + "'");
}

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOracle:
      return "oracle";
    case ProviderKind::kBaseline:
      return "baseline";
    case ProviderKind::kLearned:
      return "learned";
  }
  return "unknown";
}

std::unique_ptr<SubGoalProvider> make_provider(ProviderKind kind,
                                               const std::filesystem::path& checkpoint) {
  switch (kind) {
    case ProviderKind::kOracle:
      return std::make_unique<OracleProvider>();
    case ProviderKind::kBaseline:
      return std::make_unique<BaselineProvider>();
    case ProviderKind::kLearned:
      if (checkpoint.empty()) {
        throw std::invalid_argument("learned provider requires a checkpoint path");
      }
      return std::make_unique<LearnedProvider>(load_checkpoint(checkpoint));
  }
  throw std::invalid_argument("make_provider: unknown kind");
}

}  // namespace ddpen::subgoal
