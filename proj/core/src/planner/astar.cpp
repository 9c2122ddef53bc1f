#include "ddpen/planner/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace ddpen::planner {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

struct OpenEntry {
  std::int64_t f;
  std::int64_t g;
  std::size_t index;
};

struct OpenOrder {
  // std::priority_queue pops the "largest"; invert so the smallest f wins,
  // then the largest g, then the smallest index.
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) {
      return a.f > b.f;
    }
    if (a.g != b.g) {
      return a.g < b.g;
    }
    return a.index > b.index;
  }
};

void check_endpoint(const CostMap& map, CellIndex c, const char* which) {
  if (!map.in_bounds(c)) {
    throw PlannerError(std::string("plan: ") + which + " out of bounds");
  }
  if (map.is_lethal(c)) {
    throw PlannerError(std::string("plan: ") + which + " is lethal");
  }
}

}  // namespace

std::array<std::int64_t, 2> step_ticks(double resolution) {
  return {static_cast<std::int64_t>(std::floor(resolution * kTicksPerMeter)),
          static_cast<std::int64_t>(std::floor(resolution * kSqrt2 * kTicksPerMeter))};
}

std::int64_t edge_ticks(const CostMap& map, CellIndex a, CellIndex b,
                        const PlannerParams& params) {
  const bool diagonal = a.x != b.x && a.y != b.y;
  const std::int64_t length = step_ticks(map.resolution())[diagonal ? 1 : 0];
  const double penalty =
      static_cast<double>(length) * params.cost_weight * 0.5 * (map.at(a) + map.at(b));
  return length + std::llround(penalty);
}

double edge_cost(const CostMap& map, CellIndex a, CellIndex b, const PlannerParams& params) {
  return static_cast<double>(edge_ticks(map, a, b, params)) / kTicksPerMeter;
}

std::int64_t octile_ticks(CellIndex a, CellIndex b, double resolution) {
  const auto [orth, diag] = step_ticks(resolution);
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  const int lo = std::min(dx, dy);
  const int hi = std::max(dx, dy);
  return orth * (hi - lo) + diag * lo;
}

double octile_distance(CellIndex a, CellIndex b, double resolution) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  const int lo = std::min(dx, dy);
  const int hi = std::max(dx, dy);
  return resolution * ((hi - lo) + kSqrt2 * lo);
}

bool diagonal_blocked(const CostMap& map, CellIndex from, int dx, int dy) {
  if (dx == 0 || dy == 0) {
    return false;
  }
  const CellIndex side_a{from.x + dx, from.y};
  const CellIndex side_b{from.x, from.y + dy};
  return map.is_lethal(side_a) && map.is_lethal(side_b);
}

std::optional<GridPath> plan(const CostMap& map, CellIndex start, CellIndex goal,
                             const PlannerParams& params) {
  check_endpoint(map, start, "start");
  check_endpoint(map, goal, "goal");
  if (params.cost_weight < 0.0) {
    throw PlannerError("plan: cost_weight must be >= 0");
  }
  if (start == goal) {
    return GridPath{{start}, 0.0};
  }

  const std::int64_t unreached = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> g(map.size(), unreached);
  std::vector<std::int32_t> parent(map.size(), -1);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;

  const std::size_t start_index = map.index(start);
  const std::size_t goal_index = map.index(goal);
  g[start_index] = 0;
  open.push({octile_ticks(start, goal, map.resolution()), 0, start_index});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (top.g > g[top.index]) {
      continue;  // stale
    }
    if (top.index == goal_index) {
      GridPath path;
      path.cost_ticks = g[goal_index];
      path.cost = static_cast<double>(path.cost_ticks) / kTicksPerMeter;
      for (auto i = static_cast<std::int32_t>(goal_index); i >= 0; i = parent[i]) {
        path.cells.push_back(map.cell_of(static_cast<std::size_t>(i)));
      }
      std::reverse(path.cells.begin(), path.cells.end());
      return path;
    }
    const CellIndex cell = map.cell_of(top.index);
    for (int k = 0; k < 8; ++k) {
      const CellIndex next{cell.x + kDx[k], cell.y + kDy[k]};
      if (!map.in_bounds(next) || map.is_lethal(next) ||
          diagonal_blocked(map, cell, kDx[k], kDy[k])) {
        continue;
      }
      const std::size_t ni = map.index(next);
      const std::int64_t candidate = top.g + edge_ticks(map, cell, next, params);
      if (candidate < g[ni]) {
        g[ni] = candidate;
        parent[ni] = static_cast<std::int32_t>(top.index);
        open.push({candidate + octile_ticks(next, goal, map.resolution()), candidate, ni});
      }
    }
  }
  return std::nullopt;
}

std::vector<bool> reachable_mask(const CostMap& map, CellIndex start) {
  std::vector<bool> seen(map.size(), false);
  if (!map.in_bounds(start) || map.is_lethal(start)) {
    return seen;
  }
  std::vector<std::size_t> stack{map.index(start)};
  seen[map.index(start)] = true;
  while (!stack.empty()) {
    const CellIndex cell = map.cell_of(stack.back());
    stack.pop_back();
    for (int k = 0; k < 8; ++k) {
      const CellIndex next{cell.x + kDx[k], cell.y + kDy[k]};
      if (!map.in_bounds(next) || map.is_lethal(next) ||
          diagonal_blocked(map, cell, kDx[k], kDy[k])) {
        continue;
      }
      const std::size_t ni = map.index(next);
      if (!seen[ni]) {
        seen[ni] = true;
        stack.push_back(ni);
      }
    }
  }
  return seen;
}

SubGoalSet extract_subgoals(const GridPath& path, const std::vector<int>& steps,
                            const CostMap& map) {
  if (path.cells.empty()) {
    throw PlannerError("extract_subgoals: empty path");
  }
  SubGoalSet set;
  set.steps = steps;
  const int last = static_cast<int>(path.cells.size()) - 1;
  for (int step : steps) {
    const int i = std::clamp(step, 0, last);
    set.positions.push_back(map.cell_to_world(path.cells[static_cast<std::size_t>(i)]));
  }
  return set;
}

}  // namespace ddpen::planner
