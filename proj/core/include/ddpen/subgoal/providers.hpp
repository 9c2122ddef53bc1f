#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ddpen/grid/cost_map.hpp"
#include "ddpen/planner/astar.hpp"

namespace ddpen::subgoal {

struct SubGoalQuery {
  /// Robot-centered local map; the robot sits at the center cell.
  const grid::CostMap& map;
  Point2 goal;
};

struct SubGoalPrediction {
  /// Sub-goals at path steps 30, 50 and 70, in that order.
  std::array<Point2, 3> positions;
  double latency_s = 0.0;
  std::string provider;
  /// Set when the oracle had to fall back to the straight-line answer.
  bool degraded = false;
};

class SubGoalProvider {
 public:
  virtual ~SubGoalProvider() = default;
  virtual SubGoalPrediction predict(const SubGoalQuery& query) const = 0;
  virtual std::string name() const = 0;
};

/// Where the oracle plans to when the goal cell is lethal or unreachable.
enum class GoalFallback {
  /// Reachable cell nearest the goal, anywhere in the map.
  kNearestCell,
  /// Reachable cell of the border ring nearest the goal (the region dataset
  /// goals come from); any reachable cell if the ring has none.
  kBorderRing,
};

/// A* from the map center to the goal, or to a fallback cell near it.
class OracleProvider final : public SubGoalProvider {
 public:
  explicit OracleProvider(planner::PlannerParams params = {},
                          std::vector<int> steps = planner::default_subgoal_steps(),
                          GoalFallback fallback = GoalFallback::kBorderRing,
                          int ring_width = 2);
  SubGoalPrediction predict(const SubGoalQuery& query) const override;
  std::string name() const override { return "oracle"; }

 private:
  planner::PlannerParams params_;
  std::vector<int> steps_;
  GoalFallback fallback_;
  int ring_width_;
};

/// Points step * resolution meters from the center along the ray to the
/// goal, never past the goal, clipped to the map.
class BaselineProvider final : public SubGoalProvider {
 public:
  explicit BaselineProvider(std::vector<int> steps = planner::default_subgoal_steps());
  SubGoalPrediction predict(const SubGoalQuery& query) const override;
  std::string name() const override { return "baseline"; }

  std::array<Point2, 3> points(const grid::CostMap& map, const Point2& goal) const;

 private:
  std::vector<int> steps_;
};

Point2 clip_to_extent(const grid::CostMap& map, const Point2& p);

enum class ProviderKind { kOracle, kBaseline, kLearned };

ProviderKind parse_provider_kind(std::string_view name);
std::string_view to_string(ProviderKind kind);

/// The learned provider needs a checkpoint path; the others ignore it.
std::unique_ptr<SubGoalProvider> make_provider(ProviderKind kind,
                                               const std::filesystem::path& checkpoint = {});

}  // namespace ddpen::subgoal
