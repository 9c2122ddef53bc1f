#include "ddpen/bench/catalog.hpp"

#include <algorithm>

namespace ddpen::bench {

const sim::World& ScenarioCatalog::at(const std::string& name) const {
  for (const auto& w : scenarios) {
    if (w.name == name) {
      return w;
    }
  }
  throw std::out_of_range("catalog: no scenario named '" + name + "'");
}

ScenarioCatalog load_catalog(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw sim::ScenarioError("catalog: not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  ScenarioCatalog catalog;
  for (const auto& f : files) {
    catalog.scenarios.push_back(sim::load_world(f));
  }
  if (catalog.scenarios.empty()) {
    throw sim::ScenarioError("catalog: no scenario files in " + dir.string());
  }
  return catalog;
}

}  // namespace ddpen::bench
