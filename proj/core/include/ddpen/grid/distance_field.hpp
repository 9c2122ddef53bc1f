#pragma once

#include <vector>

#include "ddpen/grid/cost_map.hpp"

namespace ddpen::grid {

/// Euclidean distance (meters) from every cell center to the nearest lethal
/// cell center. Shares the geometry of the CostMap it was built from.
class DistanceField {
 public:
  /// Stored everywhere when the source map has no lethal cell; larger than
  /// the diagonal of any map this project builds.
  static constexpr double kNoObstacle = 1e9;

  DistanceField(int width, int height, double resolution, Point2 origin,
                std::vector<double> distances);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Point2& origin() const { return origin_; }
  bool has_obstacles() const { return has_obstacles_; }

  double at(CellIndex c) const {
    return dist_[static_cast<std::size_t>(c.y) * width_ + c.x];
  }
  std::span<const double> data() const { return dist_; }

  /// Bilinear interpolation between cell centers; indices beyond the outer
  /// ring of centers are clamped. Points outside the map rectangle return
  /// kNoObstacle with a zero gradient.
  double sample(const Point2& p, Eigen::Vector2d* gradient = nullptr) const;

 private:
  int width_;
  int height_;
  double resolution_;
  Point2 origin_;
  bool has_obstacles_;
  std::vector<double> dist_;
};

/// Exact Euclidean distance transform (two separable passes of the lower
/// envelope of parabolas) over cells with cost >= lethal_threshold.
DistanceField distance_field(const CostMap& map, double lethal_threshold);
inline DistanceField distance_field(const CostMap& map) {
  return distance_field(map, map.lethal_threshold());
}

/// Squared distance in cell units, exposed for dilation. `inf` marks cells
/// whose row/column scan found no lethal cell.
std::vector<double> squared_cell_distances(const CostMap& map,
                                           double lethal_threshold);

}  // namespace ddpen::grid
