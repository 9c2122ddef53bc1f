#pragma once

#include "ddpen/grid/cost_map.hpp"

namespace ddpen::grid {

enum class ShapeKind { kRectangle, kEllipse };

/// A primitive obstacle after its affine placement: rectangle or ellipse
/// with semi-axes `half_extent`, rotated by `yaw` about `center`.
struct Shape {
  ShapeKind kind = ShapeKind::kRectangle;
  Point2 center = Point2::Zero();
  double yaw = 0.0;
  Eigen::Vector2d half_extent = Eigen::Vector2d(0.5, 0.5);

  static Shape circle(const Point2& center, double radius);
  static Shape box(const Point2& center, double yaw, double size_x, double size_y);

  bool contains(const Point2& p) const;
  /// Radius of the circle around `center` that encloses the shape.
  double bounding_radius() const;
};

/// Marks every cell whose center lies inside `shape` with `cost`.
void rasterize(CostMap& map, const Shape& shape, double cost = 1.0);

}  // namespace ddpen::grid
