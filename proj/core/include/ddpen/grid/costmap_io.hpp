#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ddpen/grid/cost_map.hpp"

namespace ddpen::grid {

class CostMapIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain PGM (P2) body; cost 1.0 is pixel 255, top image row is the highest y.
std::string to_pgm(const CostMap& map);
/// JSON sidecar: resolution_m, origin_x_m, origin_y_m, lethal_threshold.
std::string to_sidecar_json(const CostMap& map);
CostMap from_pgm(const std::string& pgm, const std::string& sidecar_json);

/// Writes `<stem>.pgm` and `<stem>.json`.
void save_costmap(const CostMap& map, const std::filesystem::path& stem);
/// Accepts either the .pgm path or the bare stem; the sidecar is the
/// sibling .json file.
CostMap load_costmap(const std::filesystem::path& path);

}  // namespace ddpen::grid
