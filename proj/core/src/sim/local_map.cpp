#include "ddpen/sim/local_map.hpp"

#include <cmath>
#include <limits>

namespace ddpen::sim {

grid::CostMap local_costmap(const World& world, const dynamics::State& pose,
                            const CycleConfig& cfg) {
  const double half = 0.5 * cfg.map_cells * cfg.map_resolution;
  grid::CostMap map(cfg.map_cells, cfg.map_cells, cfg.map_resolution,
                    Point2(pose.x - half, pose.y - half));
  const double reach = std::sqrt(2.0) * half;
  for (const auto& o : world.obstacles) {
    const grid::Shape shape = o.shape();
    if ((shape.center - pose.position()).norm() > reach + shape.bounding_radius()) {
      continue;
    }
    grid::rasterize(map, shape);
  }
  return grid::dilate(map, cfg.inflation, cfg.decay);
}

GoalProjection project_goal(const Point2& previous, const Point2& next, const Point2& pose,
                            const grid::CostMap& map) {
  GoalProjection out;
  if (map.contains(next)) {
    out.point = next;
    out.waypoint_inside = true;
    return out;
  }
  const Point2 lo = map.origin();
  const Point2 hi = lo + Point2(map.extent_x(), map.extent_y());

  // Liang-Barsky on the infinite line p(t) = a + t * d; the exit parameter
  // is the intersection farthest along d.
  auto exit_point = [&](const Point2& a, const Point2& d) -> std::optional<Point2> {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis) {
      if (d[axis] == 0.0) {
        if (a[axis] < lo[axis] || a[axis] > hi[axis]) {
          return std::nullopt;
        }
        continue;
      }
      double ta = (lo[axis] - a[axis]) / d[axis];
      double tb = (hi[axis] - a[axis]) / d[axis];
      if (ta > tb) {
        std::swap(ta, tb);
      }
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    if (t0 > t1) {
      return std::nullopt;
    }
    Point2 p = a + t1 * d;
    // Keep the point on the closed rectangle despite rounding.
    p.x() = std::clamp(p.x(), lo.x(), hi.x());
    p.y() = std::clamp(p.y(), lo.y(), hi.y());
    return p;
  };

  const Point2 d = next - previous;
  if (d.squaredNorm() > 0.0) {
    if (auto p = exit_point(previous, d)) {
      out.point = *p;
      return out;
    }
  }
  out.degenerate = true;
  const Point2 ray = next - pose;
  if (auto p = exit_point(pose, ray); p && ray.squaredNorm() > 0.0) {
    out.point = *p;
  } else {
    out.point = pose;
  }
  return out;
}

}  // namespace ddpen::sim
