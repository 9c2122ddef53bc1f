#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ddpen/grid/cost_map.hpp"
#include "ddpen/grid/shapes.hpp"

namespace ddpen::grid {

class MapGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MapGenParams {
  std::uint64_t seed = 0;
  int min_obstacles = 4;
  int max_obstacles = 12;
  std::vector<ShapeKind> shapes = {ShapeKind::kRectangle, ShapeKind::kEllipse};

  // Affine jitter applied to the predefined templates (a 1.0 x 0.5 m
  // rectangle and a 0.35 m circle).
  double rotation_min = 0.0;
  double rotation_max = 2.0 * std::numbers::pi;
  double scale_min = 0.6;
  double scale_max = 2.5;
  /// Obstacle centers are drawn uniformly within this margin of the map edge.
  double translation_margin = 0.0;

  double inflation_radius = 0.5;
  DecayProfile decay = DecayProfile::kLinear;

  int width_cells = kDefaultCells;
  int height_cells = kDefaultCells;
  double resolution = kDefaultResolution;
  int max_retries = 100;

  void validate() const;
};

/// Shapes placed by one draw of the generator, before rasterization.
std::vector<Shape> sample_obstacles(const MapGenParams& params, Rng& rng);

/// Random obstacle map, dilated and quantized to 1/255 steps. The 3 x 3
/// block around the center cell is guaranteed non-lethal.
CostMap generate_random_map(const MapGenParams& params);

}  // namespace ddpen::grid
