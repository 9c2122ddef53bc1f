#pragma once

#include <filesystem>
#include <vector>

#include "ddpen/sim/world.hpp"

namespace ddpen::bench {

struct ScenarioCatalog {
  std::vector<sim::World> scenarios;

  const sim::World& at(const std::string& name) const;
};

/// Every *.json in `dir`, ordered by file name.
ScenarioCatalog load_catalog(const std::filesystem::path& dir);

}  // namespace ddpen::bench
