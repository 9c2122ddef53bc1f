#include "ddpen/planner/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "ddpen/grid/costmap_io.hpp"
#include "json.hpp"

namespace ddpen::planner {
namespace {

using nlohmann::json;

std::string map_stem(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

}  // namespace

std::vector<CellIndex> border_ring(const CostMap& map, int ring_width) {
  std::vector<CellIndex> ring;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      const int edge = std::min({x, y, map.width() - 1 - x, map.height() - 1 - y});
      if (edge < ring_width) {
        ring.push_back({x, y});
      }
    }
  }
  return ring;
}

Dataset generate_dataset(const DatasetParams& params) {
  if (params.n_maps < 1) {
    throw std::invalid_argument("generate_dataset: n must be >= 1");
  }
  if (params.goals_per_map < 1) {
    throw std::invalid_argument("generate_dataset: goals_per_map must be >= 1");
  }
  Dataset out;
  for (std::size_t m = 0; m < params.n_maps; ++m) {
    ++out.stats.maps_attempted;
    grid::MapGenParams gen = params.gen;
    gen.seed = derive_seed(params.seed, 2 * m);
    Rng goal_rng(derive_seed(params.seed, 2 * m + 1));

    std::shared_ptr<CostMap> map;
    try {
      map = std::make_shared<CostMap>(grid::generate_random_map(gen));
    } catch (const grid::MapGenerationError&) {
      ++out.stats.skipped_maps;
      continue;
    }
    const CellIndex start = map->center_cell();
    std::vector<CellIndex> candidates;
    for (const CellIndex& c : border_ring(*map, params.ring_width)) {
      if (!map->is_lethal(c)) {
        candidates.push_back(c);
      }
    }
    const std::vector<bool> reachable = reachable_mask(*map, start);

    std::vector<DatasetRecord> records;
    const std::size_t draws = std::min<std::size_t>(candidates.size(),
                                                    static_cast<std::size_t>(params.goals_per_map));
    for (std::size_t k = 0; k < draws; ++k) {
      // Partial Fisher-Yates: distinct goals, uniform over the ring.
      const auto j = static_cast<std::size_t>(goal_rng.uniform_int(
          static_cast<std::int64_t>(k), static_cast<std::int64_t>(candidates.size()) - 1));
      std::swap(candidates[k], candidates[j]);
      const CellIndex goal = candidates[k];
      if (!reachable[map->index(goal)]) {
        ++out.stats.unreachable_goals;
        continue;
      }
      const auto path = plan(*map, start, goal, params.planner);
      if (!path) {
        ++out.stats.unreachable_goals;
        continue;
      }
      DatasetRecord r;
      r.goal_cell = goal;
      r.goal = map->cell_to_world(goal);
      r.subgoals = extract_subgoals(*path, params.steps, *map);
      records.push_back(std::move(r));
    }
    if (records.empty()) {
      ++out.stats.skipped_maps;
      continue;
    }
    const std::size_t index = out.maps.size();
    out.maps.push_back(map);
    for (DatasetRecord& r : records) {
      r.map_index = index;
      r.map = map;
      out.records.push_back(std::move(r));
    }
  }
  out.stats.records = out.records.size();
  return out;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "maps");
  for (std::size_t i = 0; i < dataset.maps.size(); ++i) {
    grid::save_costmap(*dataset.maps[i], dir / "maps" / map_stem(i));
  }
  std::ofstream out(dir / "records.jsonl", std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_dataset: cannot write records.jsonl");
  }
  for (const DatasetRecord& r : dataset.records) {
    json j;
    j["map"] = r.map_index;
    j["goal"] = {r.goal.x(), r.goal.y()};
    j["goal_cell"] = {r.goal_cell.x, r.goal_cell.y};
    json sub = json::array();
    for (const Point2& p : r.subgoals.positions) {
      sub.push_back({p.x(), p.y()});
    }
    j["subgoals"] = sub;
    j["steps"] = r.subgoals.steps;
    out << j.dump() << '\n';
  }
  json stats;
  stats["maps_attempted"] = dataset.stats.maps_attempted;
  stats["records"] = dataset.stats.records;
  stats["skipped_maps"] = dataset.stats.skipped_maps;
  stats["unreachable_goals"] = dataset.stats.unreachable_goals;
  std::ofstream(dir / "stats.json", std::ios::binary) << stats.dump(2) << '\n';
}

Dataset read_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  std::ifstream in(dir / "records.jsonl");
  if (!in) {
    throw std::runtime_error("read_dataset: missing " + (dir / "records.jsonl").string());
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const json j = json::parse(line);
    DatasetRecord r;
    r.map_index = j.at("map").get<std::size_t>();
    while (ds.maps.size() <= r.map_index) {
      ds.maps.push_back(std::make_shared<CostMap>(
          grid::load_costmap(dir / "maps" / map_stem(ds.maps.size()))));
    }
    r.map = ds.maps[r.map_index];
    r.goal = Point2(j.at("goal").at(0).get<double>(), j.at("goal").at(1).get<double>());
    if (j.contains("goal_cell")) {
      r.goal_cell = {j["goal_cell"].at(0).get<int>(), j["goal_cell"].at(1).get<int>()};
    } else {
      r.goal_cell = r.map->clamp_to_cell(r.goal);
    }
    for (const auto& p : j.at("subgoals")) {
      r.subgoals.positions.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    r.subgoals.steps = j.at("steps").get<std::vector<int>>();
    ds.records.push_back(std::move(r));
  }
  ds.stats.records = ds.records.size();
  return ds;
}

}  // namespace ddpen::planner
