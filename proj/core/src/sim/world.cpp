#include "ddpen/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ddpen::sim {
namespace {

using nlohmann::json;

Point2 point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

void apply_cycle_overrides(CycleConfig& c, const json& j) {
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    }
  };
  get("epochs_per_cycle", c.epochs_per_cycle);
  get("epoch_budget", c.epoch_budget);
  get("executor_rate", c.executor_rate);
  get("horizon", c.horizon);
  get("dt", c.dt);
  get("arrival_radius", c.arrival_radius);
  get("final_tolerance", c.final_tolerance);
  get("stall_timeout", c.stall_timeout);
  get("progress_margin", c.progress_margin);
  get("map_cells", c.map_cells);
  get("map_resolution", c.map_resolution);
  get("inflation", c.inflation);
  get("perturb_lateral", c.perturb_lateral);
  get("perturb_heading", c.perturb_heading);
  get("w_control", c.costs.w_control);
  get("w_goal", c.costs.w_goal);
  get("w_obstacle", c.costs.w_obstacle);
  get("w_subgoal", c.costs.w_subgoal);
  get("obstacle_influence", c.costs.obstacle_influence);
  if (j.contains("schedule")) {
    const auto s = j.at("schedule").get<std::string>();
    if (s == "single") {
      c.schedule = ddp::SubgoalSchedule::kSingle;
    } else if (s == "thirds") {
      c.schedule = ddp::SubgoalSchedule::kHorizonThirds;
    } else {
      throw ScenarioError("unknown sub-goal schedule '" + s + "'");
    }
  }
}

json cycle_json(const CycleConfig& c) {
  return {{"epochs_per_cycle", c.epochs_per_cycle},
          {"epoch_budget", c.epoch_budget},
          {"executor_rate", c.executor_rate},
          {"horizon", c.horizon},
          {"dt", c.dt},
          {"arrival_radius", c.arrival_radius},
          {"final_tolerance", c.final_tolerance},
          {"stall_timeout", c.stall_timeout},
          {"progress_margin", c.progress_margin},
          {"map_cells", c.map_cells},
          {"map_resolution", c.map_resolution},
          {"inflation", c.inflation},
          {"perturb_lateral", c.perturb_lateral},
          {"perturb_heading", c.perturb_heading},
          {"w_control", c.costs.w_control},
          {"w_goal", c.costs.w_goal},
          {"w_obstacle", c.costs.w_obstacle},
          {"w_subgoal", c.costs.w_subgoal},
          {"obstacle_influence", c.costs.obstacle_influence},
          {"schedule", c.schedule == ddp::SubgoalSchedule::kSingle ? "single" : "thirds"}};
}

}  // namespace

void CycleConfig::validate() const {
  if (epochs_per_cycle < 1 || horizon < 1 || map_cells < 2) {
    throw ScenarioError("CycleConfig: epochs_per_cycle, horizon and map_cells must be positive");
  }
  if (!(epoch_budget > 0.0 && executor_rate > 0.0 && dt > 0.0 && arrival_radius > 0.0 &&
        final_tolerance > 0.0 && stall_timeout > 0.0 && progress_margin > 0.0 &&
        map_resolution > 0.0)) {
    throw ScenarioError("CycleConfig: rates, budgets and radii must be positive");
  }
  if (inflation < 0.0 || perturb_lateral < 0.0 || perturb_heading < 0.0) {
    throw ScenarioError("CycleConfig: inflation and perturbations must be >= 0");
  }
  // Simulated time runs on whole microseconds.
  const double period_us = 1e6 / executor_rate;
  if (std::abs(period_us - std::round(period_us)) > 1e-6 ||
      std::abs(epoch_budget * 1e6 - std::round(epoch_budget * 1e6)) > 1e-6) {
    throw ScenarioError("CycleConfig: executor period and epoch budget must be whole microseconds");
  }
  costs.validate();
}

grid::Shape Obstacle::shape() const {
  if (type == Type::kCylinder) {
    return grid::Shape::circle(center, size.x());
  }
  return grid::Shape::box(center, yaw, size.x(), size.y());
}

void World::validate() const {
  if (waypoints.size() < 2) {
    throw ScenarioError("world '" + name + "': at least two waypoints required");
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    for (std::size_t j = i + 1; j < waypoints.size(); ++j) {
      if (waypoints[i] == waypoints[j]) {
        throw ScenarioError("world '" + name + "': waypoints " + std::to_string(i) + " and " +
                            std::to_string(j) + " coincide");
      }
    }
    if (!bounds.contains(waypoints[i])) {
      throw ScenarioError("world '" + name + "': waypoint outside bounds");
    }
  }
  for (const auto& o : obstacles) {
    if (!(o.size.x() > 0.0) || (o.type == Obstacle::Type::kBox && !(o.size.y() > 0.0))) {
      throw ScenarioError("world '" + name + "': obstacle sizes must be positive");
    }
  }
  cycle.validate();
}

double World::course_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    total += (waypoints[i] - waypoints[i - 1]).norm();
  }
  return total;
}

World World::reversed() const {
  World w = *this;
  std::reverse(w.waypoints.begin(), w.waypoints.end());
  return w;
}

bool World::collides(const Point2& p) const {
  return std::any_of(obstacles.begin(), obstacles.end(),
                     [&p](const Obstacle& o) { return o.shape().contains(p); });
}

World parse_world(const std::string& json_text) {
  World w;
  try {
    const json j = json::parse(json_text);
    w.name = j.value("name", std::string("unnamed"));
    if (j.contains("bounds")) {
      const auto& b = j.at("bounds");
      w.bounds.min = Point2(b.at(0).get<double>(), b.at(1).get<double>());
      w.bounds.max = Point2(b.at(2).get<double>(), b.at(3).get<double>());
    }
    for (const auto& o : j.value("obstacles", json::array())) {
      Obstacle ob;
      const auto type = o.at("type").get<std::string>();
      if (type == "cylinder") {
        ob.type = Obstacle::Type::kCylinder;
      } else if (type == "box") {
        ob.type = Obstacle::Type::kBox;
      } else {
        throw ScenarioError("unknown obstacle type '" + type + "'");
      }
      const auto& pose = o.at("pose");
      ob.center = Point2(pose.at(0).get<double>(), pose.at(1).get<double>());
      ob.yaw = pose.size() > 2 ? pose.at(2).get<double>() : 0.0;
      const auto& size = o.at("size");
      const double sx = size.at(0).get<double>();
      ob.size = Eigen::Vector2d(sx, size.size() > 1 && ob.type == Obstacle::Type::kBox
                                        ? size.at(1).get<double>()
                                        : sx);
      w.obstacles.push_back(ob);
    }
    for (const auto& p : j.at("waypoints")) {
      w.waypoints.push_back(point_from(p));
    }
    if (j.contains("cycle")) {
      apply_cycle_overrides(w.cycle, j.at("cycle"));
    }
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  w.validate();
  return w;
}

World load_world(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("scenario: cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_world(ss.str());
}

std::string world_to_json(const World& w) {
  json j;
  j["name"] = w.name;
  j["bounds"] = {w.bounds.min.x(), w.bounds.min.y(), w.bounds.max.x(), w.bounds.max.y()};
  j["obstacles"] = json::array();
  for (const auto& o : w.obstacles) {
    const bool cyl = o.type == Obstacle::Type::kCylinder;
    j["obstacles"].push_back({{"type", cyl ? "cylinder" : "box"},
                              {"pose", {o.center.x(), o.center.y(), o.yaw}},
                              {"size", cyl ? json::array({o.size.x()})
                                           : json::array({o.size.x(), o.size.y()})}});
  }
  j["waypoints"] = json::array();
  for (const auto& p : w.waypoints) {
    j["waypoints"].push_back({p.x(), p.y()});
  }
  j["cycle"] = cycle_json(w.cycle);
  return j.dump(2);
}

}  // namespace ddpen::sim
