#include <cmath>

#include "ddpen/grid/cost_map.hpp"
#include "ddpen/grid/distance_field.hpp"

namespace ddpen::grid {

double decay_value(DecayProfile decay, double normalized_distance) {
  const double t = 1.0 - normalized_distance;
  if (t <= 0.0) {
    return 0.0;
  }
  switch (decay) {
    case DecayProfile::kLinear:
      return t;
    case DecayProfile::kQuadratic:
      return t * t;
  }
  return t;
}

CostMap dilate(const CostMap& map, double radius, DecayProfile decay) {
  if (radius < 0.0) {
    throw std::invalid_argument("dilate: radius must be >= 0");
  }
  CostMap out = map;
  if (radius == 0.0) {
    return out;
  }
  const std::vector<double> sq = squared_cell_distances(map, map.lethal_threshold());
  const double radius_cells = radius / map.resolution();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::isinf(sq[i]) || sq[i] == 0.0) {
      continue;
    }
    const double dist_cells = std::sqrt(sq[i]);
    if (dist_cells >= radius_cells) {
      continue;
    }
    const double value = decay_value(decay, dist_cells / radius_cells);
    if (value > out.at(i)) {
      out.set(i, value);
    }
  }
  return out;
}

}  // namespace ddpen::grid
