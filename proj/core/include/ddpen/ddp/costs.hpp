#pragma once

#include <vector>

#include <Eigen/Core>

#include "ddpen/dynamics/unicycle.hpp"
#include "ddpen/grid/distance_field.hpp"

namespace ddpen::ddp {

using dynamics::Control;
using dynamics::State;
using dynamics::Trajectory;

struct CostParams {
  double w_control = 0.05;
  double w_goal = 1.0;
  double w_obstacle = 20.0;
  double w_subgoal = 2.0;
  /// Obstacles farther than this (meters) contribute nothing.
  double obstacle_influence = 1.0;
  bool enable_control = true;
  bool enable_goal = true;
  bool enable_obstacle = true;
  bool enable_subgoal = true;
  /// Smoothing of the norm gradient at r = 0.
  double norm_epsilon = 1e-6;

  void validate() const;
};

enum class SubgoalSchedule {
  /// Every running step is pulled toward one sub-goal: the middle (50-step)
  /// prediction when three are supplied.
  kSingle,
  /// Horizon split in thirds, one prediction per third.
  kHorizonThirds,
};

struct OptimizeContext {
  /// Non-owning; null disables the obstacle term.
  const grid::DistanceField* field = nullptr;
  Point2 goal = Point2::Zero();
  /// Empty means vanilla DDP.
  std::vector<Point2> subgoals;
  SubgoalSchedule schedule = SubgoalSchedule::kSingle;
  CostParams params;

  /// Sub-goal active at running step `step` of `horizon`, or null.
  const Point2* subgoal_for_step(std::size_t step, std::size_t horizon) const;
  bool uses_subgoal() const;
};

double cost_control(const Control& u);
double cost_goal(const Point2& p, const Point2& goal);
/// ReLU(d - distance to the nearest lethal cell), distance bilinearly
/// interpolated from the field.
double cost_obstacle(const Point2& p, const grid::DistanceField& field, double influence);
double cost_subgoal(const Point2& p, const Point2* subgoal);

double running_cost(const State& s, const Control& u, const OptimizeContext& ctx,
                    std::size_t step = 0, std::size_t horizon = 1);
/// Goal and obstacle terms only.
double terminal_cost(const State& s, const OptimizeContext& ctx);

double total_cost(const Trajectory& traj, const OptimizeContext& ctx);

struct CostDerivatives {
  Eigen::Vector3d lx = Eigen::Vector3d::Zero();
  Eigen::Vector2d lu = Eigen::Vector2d::Zero();
  Eigen::Matrix3d lxx = Eigen::Matrix3d::Zero();
  Eigen::Matrix2d luu = Eigen::Matrix2d::Zero();
  Eigen::Matrix<double, 2, 3> lux = Eigen::Matrix<double, 2, 3>::Zero();
};

/// Gradients are exact (up to the norm smoothing). Hessians of the norm
/// terms use the isotropic bound I / |r|; the obstacle hinge uses the
/// outer product of its gradient scaled by 1 / d.
CostDerivatives cost_derivatives(const State& s, const Control& u, const OptimizeContext& ctx,
                                 std::size_t step = 0, std::size_t horizon = 1);
CostDerivatives terminal_derivatives(const State& s, const OptimizeContext& ctx);

}  // namespace ddpen::ddp
