#include "ddpen/grid/cost_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ddpen::grid {

CostMap::CostMap(int width_cells, int height_cells, double resolution,
                 Point2 origin, double lethal_threshold)
    : width_(width_cells),
      height_(height_cells),
      resolution_(resolution),
      origin_(std::move(origin)),
      lethal_threshold_(lethal_threshold) {
  if (width_cells <= 0 || height_cells <= 0) {
    throw std::invalid_argument("CostMap: dimensions must be positive");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("CostMap: resolution must be positive");
  }
  if (!(lethal_threshold > 0.0 && lethal_threshold <= 1.0)) {
    throw std::invalid_argument("CostMap: lethal threshold must be in (0, 1]");
  }
  cost_.assign(static_cast<std::size_t>(width_cells) *
                   static_cast<std::size_t>(height_cells),
               0.0);
}

CostMap CostMap::make_default() {
  const double half = kDefaultCells * kDefaultResolution / 2.0;
  return CostMap(kDefaultCells, kDefaultCells, kDefaultResolution,
                 Point2(-half, -half));
}

Point2 CostMap::center() const {
  return origin_ + Point2(extent_x() / 2.0, extent_y() / 2.0);
}

bool CostMap::contains(const Point2& p) const {
  return p.x() >= origin_.x() && p.y() >= origin_.y() &&
         p.x() <= origin_.x() + extent_x() && p.y() <= origin_.y() + extent_y();
}

void CostMap::set(CellIndex c, double cost) {
  if (!in_bounds(c)) {
    throw std::out_of_range("CostMap::set: cell out of bounds");
  }
  set(index(c), cost);
}

void CostMap::set(std::size_t i, double cost) {
  if (!(cost >= 0.0 && cost <= 1.0)) {
    throw std::invalid_argument("CostMap::set: cost " + std::to_string(cost) +
                                " outside [0, 1]");
  }
  cost_.at(i) = cost;
}

void CostMap::fill(double cost) {
  if (!(cost >= 0.0 && cost <= 1.0)) {
    throw std::invalid_argument("CostMap::fill: cost outside [0, 1]");
  }
  std::fill(cost_.begin(), cost_.end(), cost);
}

std::optional<CellIndex> CostMap::world_to_cell(const Point2& p) const {
  if (!p.allFinite()) {
    return std::nullopt;
  }
  const double gx = std::floor((p.x() - origin_.x()) / resolution_);
  const double gy = std::floor((p.y() - origin_.y()) / resolution_);
  if (gx < 0.0 || gy < 0.0 || gx >= width_ || gy >= height_) {
    return std::nullopt;
  }
  return CellIndex{static_cast<int>(gx), static_cast<int>(gy)};
}

Point2 CostMap::cell_to_world(CellIndex c) const {
  return origin_ + Point2((c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_);
}

CellIndex CostMap::clamp_to_cell(const Point2& p) const {
  const double gx = std::floor((p.x() - origin_.x()) / resolution_);
  const double gy = std::floor((p.y() - origin_.y()) / resolution_);
  return {static_cast<int>(std::clamp(gx, 0.0, width_ - 1.0)),
          static_cast<int>(std::clamp(gy, 0.0, height_ - 1.0))};
}

void quantize(CostMap& map) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double level = std::round(map.at(i) * 255.0);
    map.set(i, level / 255.0);
  }
}

}  // namespace ddpen::grid
