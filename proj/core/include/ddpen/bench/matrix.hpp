#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "ddpen/bench/catalog.hpp"
#include "ddpen/sim/executor.hpp"

namespace ddpen::bench {

enum class Direction { kForward, kBackward };
std::string_view to_string(Direction d);

struct RunOutcome {
  std::string scenario;
  sim::ControllerMode mode = sim::ControllerMode::kDdp;
  Direction direction = Direction::kForward;
  int run_index = 0;
  std::uint64_t seed = 0;
  sim::RunResult result;
};

struct CellKey {
  std::string scenario;
  sim::ControllerMode mode;
  Direction direction;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellStats {
  int runs = 0;
  int completed = 0;
  /// Over completed runs only; population standard deviation.
  double mean_s = 0.0;
  double std_s = 0.0;
  std::map<std::string, int> failures;
};

struct BenchResult {
  /// Ordered by (scenario, mode, direction, run index).
  std::vector<RunOutcome> runs;
  std::map<CellKey, CellStats> cells;
  std::string provider;
};

struct MatrixOptions {
  std::vector<sim::ControllerMode> modes = {sim::ControllerMode::kDdp,
                                            sim::ControllerMode::kDdpen};
  int runs_per_cell = 5;
  std::uint64_t seed_base = 0;
  /// Restrict to these scenario names; empty means all.
  std::vector<std::string> scenarios;
};

/// Run r of every cell uses seed seed_base + r.
BenchResult run_matrix(const ScenarioCatalog& catalog, const MatrixOptions& options,
                       const subgoal::SubGoalProvider& provider);

CellStats summarize(const std::vector<const RunOutcome*>& runs);

}  // namespace ddpen::bench
