#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ddpen/common.hpp"

namespace ddpen::dynamics {

class DynamicsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Planar pose. Costs only look at (x, y); heading carries the angular
/// velocity limit.
struct State {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Point2 position() const { return {x, y}; }
  friend bool operator==(const State&, const State&) = default;
};

struct Control {
  double v = 0.0;
  double omega = 0.0;

  friend bool operator==(const Control&, const Control&) = default;
};

struct ControlLimits {
  double v_max = 1.5;
  double omega_max = 0.5;
};

Control clamp(const Control& u, const ControlLimits& limits = {});

/// Euler-integrated unicycle; controls are clamped before integration.
State step(const State& s, const Control& u, double dt, const ControlLimits& limits = {});

struct Trajectory {
  std::vector<State> states;      // N + 1
  std::vector<Control> controls;  // N, already clamped
  double dt = 0.1;

  std::size_t horizon() const { return controls.size(); }
};

/// Rolls `controls` forward from s0. The stored controls are the clamped
/// ones, so states[i + 1] == step(states[i], controls[i], dt) holds exactly.
Trajectory rollout(const State& s0, std::span<const Control> controls, double dt,
                   const ControlLimits& limits = {});

bool is_rollout_consistent(const Trajectory& traj, const ControlLimits& limits = {});

using StateMatrix = Eigen::Matrix3d;
using ControlMatrix = Eigen::Matrix<double, 3, 2>;

struct Linearization {
  StateMatrix A;
  ControlMatrix B;
};

/// Jacobians of `step`. The clamp is ignored in B so saturated controls keep
/// a usable gradient; A is evaluated at the clamped velocity.
Linearization linearize(const State& s, const Control& u, double dt,
                        const ControlLimits& limits = {});

/// CSV with columns t,x,y,heading,v,omega; the final state row leaves the
/// control columns empty.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double t0 = 0.0);

}  // namespace ddpen::dynamics
