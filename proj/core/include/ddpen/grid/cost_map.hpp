#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ddpen/common.hpp"

namespace ddpen::grid {

struct CellIndex {
  int x = 0;
  int y = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

inline constexpr int kDefaultCells = 200;
inline constexpr double kDefaultResolution = 0.05;

/// Row-major obstacle cost grid. Costs live in [0, 1]; a cell is lethal when
/// its cost reaches `lethal_threshold` (1.0 unless configured otherwise).
/// Cell (0, 0) has its lower-left corner at `origin`.
class CostMap {
 public:
  CostMap(int width_cells, int height_cells, double resolution, Point2 origin,
          double lethal_threshold = 1.0);

  /// 200 x 200 cells at 0.05 m, centered on the world origin.
  static CostMap make_default();

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Point2& origin() const { return origin_; }
  double lethal_threshold() const { return lethal_threshold_; }
  std::size_t size() const { return cost_.size(); }

  double extent_x() const { return width_ * resolution_; }
  double extent_y() const { return height_ * resolution_; }
  Point2 center() const;
  CellIndex center_cell() const { return {width_ / 2, height_ / 2}; }

  bool in_bounds(CellIndex c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  /// Is `p` inside the closed map rectangle?
  bool contains(const Point2& p) const;

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  CellIndex cell_of(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  double at(CellIndex c) const { return cost_[index(c)]; }
  double at(std::size_t i) const { return cost_[i]; }
  /// Throws std::out_of_range for cells outside the grid and
  /// std::invalid_argument for costs outside [0, 1].
  void set(CellIndex c, double cost);
  void set(std::size_t i, double cost);
  void fill(double cost);

  bool is_lethal(CellIndex c) const { return at(c) >= lethal_threshold_; }
  bool is_lethal(std::size_t i) const { return cost_[i] >= lethal_threshold_; }

  /// nullopt is the out-of-bounds marker; points are never clamped.
  std::optional<CellIndex> world_to_cell(const Point2& p) const;
  /// World coordinates of the cell center.
  Point2 cell_to_world(CellIndex c) const;

  std::span<const double> data() const { return cost_; }

  /// Cell index of `p` clamped into the grid.
  CellIndex clamp_to_cell(const Point2& p) const;

  friend bool operator==(const CostMap&, const CostMap&) = default;

 private:
  int width_;
  int height_;
  double resolution_;
  Point2 origin_;
  double lethal_threshold_;
  std::vector<double> cost_;
};

/// Rounds every cost to the nearest multiple of 1/255, the resolution of the
/// PGM costmap format.
void quantize(CostMap& map);

enum class DecayProfile { kLinear, kQuadratic };

/// Spreads lethal cost outward: every cell within `radius` of a lethal cell
/// gets max(cost, decay(distance / radius)).
CostMap dilate(const CostMap& map, double radius,
               DecayProfile decay = DecayProfile::kLinear);

double decay_value(DecayProfile decay, double normalized_distance);

}  // namespace ddpen::grid
