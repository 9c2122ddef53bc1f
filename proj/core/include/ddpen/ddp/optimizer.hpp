#pragma once

#include <span>
#include <string>
#include <vector>

#include "ddpen/ddp/costs.hpp"

namespace ddpen::ddp {

struct OptimizerSettings {
  int max_iterations = 50;
  /// Stop when an accepted step improves the cost by less than this fraction.
  double relative_tolerance = 1e-6;
  double mu_init = 1e-6;
  double mu_increase = 10.0;
  double mu_decrease = 2.0;
  double mu_max = 1e10;
  /// Step scales 1, 1/2, ..., 1/2^(line_search_steps - 1).
  int line_search_steps = 7;
  double dt = 0.1;
  dynamics::ControlLimits limits;
};

enum class OptimizeStatus {
  kConverged,
  kMaxIterations,
  kNonFiniteCost,
  kRegularizationExhausted,
};

const char* to_string(OptimizeStatus status);

struct IterationRecord {
  int iteration = 0;
  /// Cost after the iteration (unchanged when rejected).
  double cost = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  bool accepted = false;
};

struct OptimizeReport {
  Trajectory trajectory;
  /// Initial cost followed by one entry per iteration.
  std::vector<double> cost_trace;
  std::vector<IterationRecord> iterations;
  std::vector<double> regularization_trace;
  int accepted = 0;
  int rejected = 0;
  /// Iterations run (one backward pass plus line search each).
  int epochs = 0;
  OptimizeStatus status = OptimizeStatus::kMaxIterations;
  std::string diagnostic;

  bool ok() const {
    return status == OptimizeStatus::kConverged || status == OptimizeStatus::kMaxIterations;
  }
  double initial_cost() const { return cost_trace.front(); }
  double final_cost() const { return cost_trace.back(); }
};

/// iLQR: linearized dynamics, quadratic cost model, Levenberg-regularized
/// backward pass and a backtracking forward pass that only accepts strict
/// cost decreases.
OptimizeReport optimize(const State& s0, std::span<const Control> initial_controls,
                        const OptimizeContext& ctx, const OptimizerSettings& settings = {});

}  // namespace ddpen::ddp
