#include "ddpen/grid/shapes.hpp"

#include <algorithm>
#include <cmath>

namespace ddpen::grid {

Shape Shape::circle(const Point2& center, double radius) {
  return Shape{ShapeKind::kEllipse, center, 0.0, Eigen::Vector2d(radius, radius)};
}

Shape Shape::box(const Point2& center, double yaw, double size_x, double size_y) {
  return Shape{ShapeKind::kRectangle, center, yaw,
               Eigen::Vector2d(size_x / 2.0, size_y / 2.0)};
}

bool Shape::contains(const Point2& p) const {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const Point2 d = p - center;
  const double lx = c * d.x() + s * d.y();
  const double ly = -s * d.x() + c * d.y();
  if (kind == ShapeKind::kRectangle) {
    return std::abs(lx) <= half_extent.x() && std::abs(ly) <= half_extent.y();
  }
  const double ex = lx / half_extent.x();
  const double ey = ly / half_extent.y();
  return ex * ex + ey * ey <= 1.0;
}

double Shape::bounding_radius() const {
  return kind == ShapeKind::kRectangle ? half_extent.norm() : half_extent.maxCoeff();
}

void rasterize(CostMap& map, const Shape& shape, double cost) {
  const double r = shape.bounding_radius();
  const double res = map.resolution();
  const Point2& o = map.origin();
  const int x_lo = std::max(0, static_cast<int>(std::floor((shape.center.x() - r - o.x()) / res)));
  const int y_lo = std::max(0, static_cast<int>(std::floor((shape.center.y() - r - o.y()) / res)));
  const int x_hi = std::min(map.width() - 1, static_cast<int>(std::ceil((shape.center.x() + r - o.x()) / res)));
  const int y_hi = std::min(map.height() - 1, static_cast<int>(std::ceil((shape.center.y() + r - o.y()) / res)));
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const CellIndex c{x, y};
      if (shape.contains(map.cell_to_world(c)) && map.at(c) < cost) {
        map.set(c, cost);
      }
    }
  }
}

}  // namespace ddpen::grid
