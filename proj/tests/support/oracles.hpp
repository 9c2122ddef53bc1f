#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance binary.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ddpen/ddp/costs.hpp"
#include "ddpen/grid/cost_map.hpp"
#include "ddpen/grid/distance_field.hpp"
#include "ddpen/planner/astar.hpp"
#include "ddpen/planner/dataset.hpp"

namespace ddpen::oracles {

/// |a - b| / max(1, |a|, |b|)
double relative_error(double a, double b);

/// Plain Dijkstra over the planner's graph (8-connected, no cutting between
/// two lethal orthogonal neighbors, the documented edge cost). +inf when the
/// goal is unreachable.
double dijkstra_cost(const grid::CostMap& map, grid::CellIndex start, grid::CellIndex goal,
                     double cost_weight);

struct PlannerEquivalence {
  int maps = 0;
  int compared = 0;
  int mismatches = 0;
  std::string first_mismatch;
};
/// Random maps up to 64 x 64 with random soft costs; A* cost must equal the
/// Dijkstra cost exactly, and reachability must agree.
PlannerEquivalence check_planner_equivalence(int maps, std::uint64_t seed);

/// Random optimizer problem on a random obstacle map. ctx.field is left
/// null because the instance may move; point it at `field` before use.
struct Instance {
  grid::CostMap map;
  grid::DistanceField field;
  ddp::OptimizeContext ctx;
  dynamics::State start;
  std::vector<dynamics::Control> controls;
};
Instance random_instance(std::uint64_t seed, bool with_subgoal);

struct DerivativeCheck {
  int samples = 0;
  int skipped = 0;
  double max_cost_error = 0.0;
  double max_dynamics_error = 0.0;
  int failures = 0;
  std::string first_failure;
};
/// Central differences (h = 1e-6) of the running cost, terminal cost and
/// step() against cost_derivatives(), terminal_derivatives() and
/// linearize(). Samples within 1e-4 m of a cell-center line, the hinge kink
/// or a norm singularity are redrawn.
DerivativeCheck check_derivatives(int samples, std::uint64_t seed, double tolerance);

struct DescentCheck {
  int instances = 0;
  int violations = 0;
  int aborted = 0;
  std::string first_violation;
};
/// Cost over accepted iterations never increases.
DescentCheck check_monotone_descent(int instances, std::uint64_t seed, int max_iterations);

struct EquivalenceCheck {
  int samples = 0;
  int mismatches = 0;
};
/// w_subgoal = 0 with a sub-goal supplied against no sub-goal at all,
/// compared with ==.
EquivalenceCheck check_zero_subgoal_equivalence(int samples, std::uint64_t seed);

struct FidelityCheck {
  std::size_t records = 0;
  std::size_t exact = 0;
  std::string first_mismatch;
};
/// The oracle provider must return the stored sub-goals bit-for-bit.
FidelityCheck check_oracle_fidelity(const std::vector<planner::DatasetRecord>& records,
                                    const planner::PlannerParams& params);

}  // namespace ddpen::oracles
