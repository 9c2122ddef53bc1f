#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "ddpen/grid/map_gen.hpp"
#include "ddpen/planner/astar.hpp"

namespace ddpen::planner {

struct DatasetRecord {
  std::size_t map_index = 0;
  std::shared_ptr<const CostMap> map;
  Point2 goal = Point2::Zero();
  CellIndex goal_cell;
  SubGoalSet subgoals;
};

struct DatasetParams {
  std::size_t n_maps = 1;
  grid::MapGenParams gen;
  int goals_per_map = 4;
  std::uint64_t seed = 0;
  PlannerParams planner;
  std::vector<int> steps = default_subgoal_steps();
  /// Width of the border ring goals are drawn from, in cells.
  int ring_width = 2;
};

struct DatasetStats {
  std::size_t maps_attempted = 0;
  std::size_t records = 0;
  /// Maps dropped because generation failed or no goal was reachable.
  std::size_t skipped_maps = 0;
  std::size_t unreachable_goals = 0;
};

struct Dataset {
  std::vector<std::shared_ptr<const CostMap>> maps;
  std::vector<DatasetRecord> records;
  DatasetStats stats;
};

/// Cells within `ring_width` of the map edge, in row-major order.
std::vector<CellIndex> border_ring(const CostMap& map, int ring_width);

/// Each map uses its own RNG stream derived from (seed, map number), so the
/// output does not depend on generation order.
Dataset generate_dataset(const DatasetParams& params);

/// maps/NNNNNN.pgm + maps/NNNNNN.json + records.jsonl
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace ddpen::planner
