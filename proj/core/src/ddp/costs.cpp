#include "ddpen/ddp/costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddpen::ddp {
namespace {

// Adds w * |p - target| derivatives to the position block.
void add_norm_term(CostDerivatives& d, const Point2& p, const Point2& target, double w,
                   double eps) {
  const Eigen::Vector2d r = p - target;
  const double s = std::sqrt(r.squaredNorm() + eps * eps);
  d.lx.head<2>() += w * r / s;
  d.lxx.topLeftCorner<2, 2>() += (w / s) * Eigen::Matrix2d::Identity();
}

void add_obstacle_term(CostDerivatives& d, const Point2& p, const OptimizeContext& ctx) {
  Eigen::Vector2d grad;
  const double dist = ctx.field->sample(p, &grad);
  const double influence = ctx.params.obstacle_influence;
  if (dist >= influence) {
    return;
  }
  const double w = ctx.params.w_obstacle;
  d.lx.head<2>() -= w * grad;
  d.lxx.topLeftCorner<2, 2>() += (w / influence) * grad * grad.transpose();
}

bool goal_active(const CostParams& p) { return p.enable_goal && p.w_goal > 0.0; }
bool obstacle_active(const OptimizeContext& ctx) {
  return ctx.field != nullptr && ctx.params.enable_obstacle && ctx.params.w_obstacle > 0.0;
}

}  // namespace

void CostParams::validate() const {
  if (w_control < 0.0 || w_goal < 0.0 || w_obstacle < 0.0 || w_subgoal < 0.0) {
    throw std::invalid_argument("CostParams: weights must be >= 0");
  }
  if (!(obstacle_influence > 0.0)) {
    throw std::invalid_argument("CostParams: obstacle influence must be > 0");
  }
  if (!(norm_epsilon > 0.0)) {
    throw std::invalid_argument("CostParams: norm epsilon must be > 0");
  }
}

bool OptimizeContext::uses_subgoal() const {
  return !subgoals.empty() && params.enable_subgoal && params.w_subgoal > 0.0;
}

const Point2* OptimizeContext::subgoal_for_step(std::size_t step, std::size_t horizon) const {
  if (!uses_subgoal()) {
    return nullptr;
  }
  if (schedule == SubgoalSchedule::kSingle || subgoals.size() == 1) {
    return &subgoals[std::min<std::size_t>(1, subgoals.size() - 1)];
  }
  const std::size_t n = subgoals.size();
  const std::size_t slot = std::min(n - 1, step * n / std::max<std::size_t>(horizon, 1));
  return &subgoals[slot];
}

double cost_control(const Control& u) { return u.v * u.v + u.omega * u.omega; }

double cost_goal(const Point2& p, const Point2& goal) { return (p - goal).norm(); }

double cost_obstacle(const Point2& p, const grid::DistanceField& field, double influence) {
  return std::max(0.0, influence - field.sample(p));
}

double cost_subgoal(const Point2& p, const Point2* subgoal) {
  return subgoal == nullptr ? 0.0 : (p - *subgoal).norm();
}

double running_cost(const State& s, const Control& u, const OptimizeContext& ctx,
                    std::size_t step, std::size_t horizon) {
  const CostParams& p = ctx.params;
  const Point2 pos = s.position();
  double total = 0.0;
  if (p.enable_control && p.w_control > 0.0) {
    total += p.w_control * cost_control(u);
  }
  if (goal_active(p)) {
    total += p.w_goal * cost_goal(pos, ctx.goal);
  }
  if (obstacle_active(ctx)) {
    total += p.w_obstacle * cost_obstacle(pos, *ctx.field, p.obstacle_influence);
  }
  if (const Point2* sg = ctx.subgoal_for_step(step, horizon)) {
    total += p.w_subgoal * cost_subgoal(pos, sg);
  }
  return total;
}

double terminal_cost(const State& s, const OptimizeContext& ctx) {
  const CostParams& p = ctx.params;
  const Point2 pos = s.position();
  double total = 0.0;
  if (goal_active(p)) {
    total += p.w_goal * cost_goal(pos, ctx.goal);
  }
  if (obstacle_active(ctx)) {
    total += p.w_obstacle * cost_obstacle(pos, *ctx.field, p.obstacle_influence);
  }
  return total;
}

double total_cost(const Trajectory& traj, const OptimizeContext& ctx) {
  const std::size_t n = traj.controls.size();
  double j = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    j += running_cost(traj.states[i], traj.controls[i], ctx, i, n);
  }
  return j + terminal_cost(traj.states[n], ctx);
}

CostDerivatives cost_derivatives(const State& s, const Control& u, const OptimizeContext& ctx,
                                 std::size_t step, std::size_t horizon) {
  const CostParams& p = ctx.params;
  CostDerivatives d;
  const Point2 pos = s.position();
  if (p.enable_control && p.w_control > 0.0) {
    d.lu = 2.0 * p.w_control * Eigen::Vector2d(u.v, u.omega);
    d.luu = 2.0 * p.w_control * Eigen::Matrix2d::Identity();
  }
  if (goal_active(p)) {
    add_norm_term(d, pos, ctx.goal, p.w_goal, p.norm_epsilon);
  }
  if (obstacle_active(ctx)) {
    add_obstacle_term(d, pos, ctx);
  }
  if (const Point2* sg = ctx.subgoal_for_step(step, horizon)) {
    add_norm_term(d, pos, *sg, p.w_subgoal, p.norm_epsilon);
  }
  return d;
}

CostDerivatives terminal_derivatives(const State& s, const OptimizeContext& ctx) {
  const CostParams& p = ctx.params;
  CostDerivatives d;
  const Point2 pos = s.position();
  if (goal_active(p)) {
    add_norm_term(d, pos, ctx.goal, p.w_goal, p.norm_epsilon);
  }
  if (obstacle_active(ctx)) {
    add_obstacle_term(d, pos, ctx);
  }
  return d;
}

}  // namespace ddpen::ddp
