#include "ddpen/bench/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace ddpen::bench {

std::string_view to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

CellStats summarize(const std::vector<const RunOutcome*>& runs) {
  CellStats s;
  s.runs = static_cast<int>(runs.size());
  std::vector<double> times;
  for (const RunOutcome* r : runs) {
    if (r->result.completed) {
      times.push_back(r->result.elapsed);
    } else {
      ++s.failures[std::string(sim::to_string(r->result.failure))];
    }
  }
  s.completed = static_cast<int>(times.size());
  if (!times.empty()) {
    double sum = 0.0;
    for (const double t : times) {
      sum += t;
    }
    s.mean_s = sum / static_cast<double>(times.size());
    double var = 0.0;
    for (const double t : times) {
      var += (t - s.mean_s) * (t - s.mean_s);
    }
    s.std_s = std::sqrt(var / static_cast<double>(times.size()));
  }
  return s;
}

BenchResult run_matrix(const ScenarioCatalog& catalog, const MatrixOptions& options,
                       const subgoal::SubGoalProvider& provider) {
  if (options.runs_per_cell < 1 || options.modes.empty()) {
    throw std::invalid_argument("run_matrix: need at least one mode and one run per cell");
  }
  for (const auto& name : options.scenarios) {
    catalog.at(name);  // throws on unknown names
  }
  BenchResult out;
  out.provider = provider.name();
  for (const auto& world : catalog.scenarios) {
    if (!options.scenarios.empty() &&
        std::find(options.scenarios.begin(), options.scenarios.end(), world.name) ==
            options.scenarios.end()) {
      continue;
    }
    const sim::World backward = world.reversed();
    for (const auto mode : options.modes) {
      for (const auto dir : {Direction::kForward, Direction::kBackward}) {
        std::vector<const RunOutcome*> cell;
        const std::size_t first = out.runs.size();
        for (int r = 0; r < options.runs_per_cell; ++r) {
          RunOutcome o;
          o.scenario = world.name;
          o.mode = mode;
          o.direction = dir;
          o.run_index = r;
          o.seed = options.seed_base + static_cast<std::uint64_t>(r);
          sim::SimConfig cfg;
          cfg.mode = mode;
          cfg.provider = provider.name();
          cfg.seed = o.seed;
          o.result = sim::execute(dir == Direction::kForward ? world : backward, cfg, &provider);
          out.runs.push_back(std::move(o));
        }
        for (std::size_t i = first; i < out.runs.size(); ++i) {
          cell.push_back(&out.runs[i]);
        }
        out.cells[{world.name, mode, dir}] = summarize(cell);
      }
    }
  }
  return out;
}

}  // namespace ddpen::bench
