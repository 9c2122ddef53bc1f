#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ddpen/ddp/optimizer.hpp"
#include "ddpen/grid/cost_map.hpp"
#include "ddpen/grid/shapes.hpp"

namespace ddpen::sim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Running-cycle and executor settings. Times are seconds.
struct CycleConfig {
  int epochs_per_cycle = 4;
  double epoch_budget = 0.075;
  double executor_rate = 10.0;
  int horizon = 50;
  double dt = 0.1;
  /// Intermediate waypoints count as reached inside this radius.
  double arrival_radius = 1.0;
  /// The final waypoint has to be reached this closely.
  double final_tolerance = 0.2;
  /// A run fails when it has not made progress for stall_timeout: reached a
  /// waypoint, or come progress_margin closer to the current one than ever.
  double stall_timeout = 60.0;
  double progress_margin = 0.5;

  int map_cells = grid::kDefaultCells;
  double map_resolution = grid::kDefaultResolution;
  /// Cost band around obstacles; only the sub-goal planner sees it.
  double inflation = 1.5;
  grid::DecayProfile decay = grid::DecayProfile::kLinear;

  ddp::CostParams costs;
  ddp::SubgoalSchedule schedule = ddp::SubgoalSchedule::kSingle;
  dynamics::ControlLimits limits;

  /// Seeded start perturbation standing in for simulator noise.
  double perturb_lateral = 0.1;
  double perturb_heading = 0.05;

  void validate() const;
  /// Simulated optimizer latency per cycle.
  double cycle_period() const { return epochs_per_cycle * epoch_budget; }
};

struct Obstacle {
  enum class Type { kCylinder, kBox };
  Type type = Type::kBox;
  /// x, y, yaw
  Point2 center = Point2::Zero();
  double yaw = 0.0;
  /// Cylinder: radius. Box: side lengths along its own x and y.
  Eigen::Vector2d size = Eigen::Vector2d(1.0, 1.0);

  grid::Shape shape() const;
};

struct Bounds {
  Point2 min = Point2(-1e3, -1e3);
  Point2 max = Point2(1e3, 1e3);

  bool contains(const Point2& p) const {
    return p.x() >= min.x() && p.y() >= min.y() && p.x() <= max.x() && p.y() <= max.y();
  }
};

struct World {
  std::string name;
  std::vector<Obstacle> obstacles;
  std::vector<Point2> waypoints;
  Bounds bounds;
  CycleConfig cycle;

  /// Throws ScenarioError on repeated waypoints or an empty course.
  void validate() const;
  double course_length() const;
  /// Same world, course driven from the last waypoint back to the first.
  World reversed() const;
  /// Is `p` inside any obstacle?
  bool collides(const Point2& p) const;
};

World parse_world(const std::string& json_text);
World load_world(const std::filesystem::path& path);
std::string world_to_json(const World& world);

}  // namespace ddpen::sim
