#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ddpen/grid/cost_map.hpp"

namespace ddpen::planner {

using grid::CellIndex;
using grid::CostMap;

class PlannerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PlannerParams {
  /// Edge cost = step length * (1 + cost_weight * mean endpoint cost).
  double cost_weight = 4.0;
};

/// Path costs are summed as integers in units of 2^-36 m, so the optimum does
/// not depend on the order in which equal-cost paths are explored.
inline constexpr double kTicksPerMeter = 68719476736.0;

struct GridPath {
  std::vector<CellIndex> cells;
  /// Accumulated edge cost in meters-equivalent units (cost_ticks / kTicksPerMeter).
  double cost = 0.0;
  std::int64_t cost_ticks = 0;
};

/// Step lengths in ticks, rounded down: {orthogonal, diagonal}.
std::array<std::int64_t, 2> step_ticks(double resolution);

/// Edge cost between 8-connected neighbors `a` and `b`: the step length plus
/// the rounded cost penalty, in ticks.
std::int64_t edge_ticks(const CostMap& map, CellIndex a, CellIndex b, const PlannerParams& params);
double edge_cost(const CostMap& map, CellIndex a, CellIndex b, const PlannerParams& params);

/// Octile distance over the tick step lengths; the A* heuristic.
std::int64_t octile_ticks(CellIndex a, CellIndex b, double resolution);
/// Octile distance in meters.
double octile_distance(CellIndex a, CellIndex b, double resolution);

/// Diagonal moves may not cut between two lethal orthogonal neighbors.
bool diagonal_blocked(const CostMap& map, CellIndex from, int dx, int dy);

/// 8-connected A* with the octile heuristic. Ties on f are broken toward the
/// larger g. Returns nullopt when the goal is unreachable; throws PlannerError
/// when start or goal is out of bounds or lethal.
std::optional<GridPath> plan(const CostMap& map, CellIndex start, CellIndex goal,
                             const PlannerParams& params = {});

/// Cells reachable from `start` through non-lethal cells, as a mask.
std::vector<bool> reachable_mask(const CostMap& map, CellIndex start);

struct SubGoalSet {
  std::vector<Point2> positions;
  std::vector<int> steps;
};

inline const std::vector<int>& default_subgoal_steps() {
  static const std::vector<int> steps{30, 50, 70};
  return steps;
}

/// World positions of path cells at `steps`, clamped to the last cell.
SubGoalSet extract_subgoals(const GridPath& path, const std::vector<int>& steps,
                            const CostMap& map);

}  // namespace ddpen::planner
