#pragma once

#include "ddpen/dynamics/unicycle.hpp"
#include "ddpen/sim/world.hpp"

namespace ddpen::sim {

/// World-aligned map of cfg.map_cells^2 cells with the robot in the center
/// cell. Obstacles are rasterized lethal, then dilated by cfg.inflation.
grid::CostMap local_costmap(const World& world, const dynamics::State& pose,
                            const CycleConfig& cfg);

struct GoalProjection {
  Point2 point = Point2::Zero();
  /// The next waypoint lies inside the map and is used as is.
  bool waypoint_inside = false;
  /// previous == next, or the course line misses the map; the ray from the
  /// pose toward the next waypoint was used instead.
  bool degenerate = false;
};

/// Where the course line previous -> next leaves the map, farthest along
/// the direction of travel.
GoalProjection project_goal(const Point2& previous, const Point2& next, const Point2& pose,
                            const grid::CostMap& map);

}  // namespace ddpen::sim
