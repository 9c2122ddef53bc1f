#include "ddpen/grid/map_gen.hpp"

#include <string>

namespace ddpen::grid {
namespace {

constexpr double kRectTemplateX = 1.0;
constexpr double kRectTemplateY = 0.5;
constexpr double kCircleTemplateRadius = 0.35;

bool center_is_free(const CostMap& map) {
  const CellIndex c = map.center_cell();
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const CellIndex n{c.x + dx, c.y + dy};
      if (map.in_bounds(n) && map.is_lethal(n)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

void MapGenParams::validate() const {
  if (min_obstacles < 0 || max_obstacles < min_obstacles) {
    throw std::invalid_argument("MapGenParams: empty obstacle count range");
  }
  if (max_obstacles > 0 && shapes.empty()) {
    throw std::invalid_argument("MapGenParams: no obstacle shapes enabled");
  }
  if (inflation_radius < 0.0) {
    throw std::invalid_argument("MapGenParams: inflation radius must be >= 0");
  }
  if (!(scale_min > 0.0) || scale_max < scale_min) {
    throw std::invalid_argument("MapGenParams: invalid scale range");
  }
  if (max_retries < 1) {
    throw std::invalid_argument("MapGenParams: max_retries must be >= 1");
  }
}

std::vector<Shape> sample_obstacles(const MapGenParams& params, Rng& rng) {
  const double ex = params.width_cells * params.resolution;
  const double ey = params.height_cells * params.resolution;
  const Point2 origin(-ex / 2.0, -ey / 2.0);
  const auto count = rng.uniform_int(params.min_obstacles, params.max_obstacles);
  std::vector<Shape> shapes;
  shapes.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const auto kind_index =
        rng.uniform_int(0, static_cast<std::int64_t>(params.shapes.size()) - 1);
    Shape s;
    s.kind = params.shapes[static_cast<std::size_t>(kind_index)];
    const double sx = rng.uniform(params.scale_min, params.scale_max);
    const double sy = rng.uniform(params.scale_min, params.scale_max);
    if (s.kind == ShapeKind::kRectangle) {
      s.half_extent = Eigen::Vector2d(kRectTemplateX * sx, kRectTemplateY * sy) / 2.0;
    } else {
      s.half_extent = Eigen::Vector2d(kCircleTemplateRadius * sx, kCircleTemplateRadius * sy);
    }
    s.yaw = rng.uniform(params.rotation_min, params.rotation_max);
    s.center = origin + Point2(rng.uniform(params.translation_margin, ex - params.translation_margin),
                               rng.uniform(params.translation_margin, ey - params.translation_margin));
    shapes.push_back(s);
  }
  return shapes;
}

CostMap generate_random_map(const MapGenParams& params) {
  params.validate();
  const double ex = params.width_cells * params.resolution;
  const double ey = params.height_cells * params.resolution;
  Rng rng(params.seed);
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    CostMap map(params.width_cells, params.height_cells, params.resolution,
                Point2(-ex / 2.0, -ey / 2.0));
    for (const Shape& s : sample_obstacles(params, rng)) {
      rasterize(map, s);
    }
    CostMap out = dilate(map, params.inflation_radius, params.decay);
    quantize(out);
    if (center_is_free(out)) {
      return out;
    }
  }
  throw MapGenerationError("generate_random_map: center blocked after " +
                           std::to_string(params.max_retries) + " attempts");
}

}  // namespace ddpen::grid
