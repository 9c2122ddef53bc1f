#include "ddpen/dynamics/unicycle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ddpen::dynamics {

Control clamp(const Control& u, const ControlLimits& limits) {
  return {std::clamp(u.v, -limits.v_max, limits.v_max),
          std::clamp(u.omega, -limits.omega_max, limits.omega_max)};
}

State step(const State& s, const Control& u, double dt, const ControlLimits& limits) {
  if (!(dt > 0.0)) {
    throw DynamicsError("step: dt must be positive");
  }
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.heading) ||
      !std::isfinite(u.v) || !std::isfinite(u.omega) || !std::isfinite(dt)) {
    throw DynamicsError("step: non-finite input");
  }
  const Control c = clamp(u, limits);
  return {s.x + c.v * std::cos(s.heading) * dt, s.y + c.v * std::sin(s.heading) * dt,
          normalize_angle(s.heading + c.omega * dt)};
}

Trajectory rollout(const State& s0, std::span<const Control> controls, double dt,
                   const ControlLimits& limits) {
  if (controls.empty()) {
    throw DynamicsError("rollout: empty control sequence");
  }
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(controls.size() + 1);
  traj.controls.reserve(controls.size());
  traj.states.push_back(s0);
  for (const Control& u : controls) {
    const Control c = clamp(u, limits);
    traj.controls.push_back(c);
    traj.states.push_back(step(traj.states.back(), c, dt, limits));
  }
  return traj;
}

bool is_rollout_consistent(const Trajectory& traj, const ControlLimits& limits) {
  if (traj.states.size() != traj.controls.size() + 1) {
    return false;
  }
  for (std::size_t i = 0; i < traj.controls.size(); ++i) {
    if (!(step(traj.states[i], traj.controls[i], traj.dt, limits) == traj.states[i + 1])) {
      return false;
    }
  }
  return true;
}

Linearization linearize(const State& s, const Control& u, double dt,
                        const ControlLimits& limits) {
  const Control c = clamp(u, limits);
  const double cs = std::cos(s.heading);
  const double sn = std::sin(s.heading);
  Linearization lin;
  lin.A.setIdentity();
  lin.A(0, 2) = -c.v * sn * dt;
  lin.A(1, 2) = c.v * cs * dt;
  lin.B.setZero();
  lin.B(0, 0) = cs * dt;
  lin.B(1, 0) = sn * dt;
  lin.B(2, 1) = dt;
  return lin;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, double t0) {
  out << "t,x,y,heading,v,omega\n";
  char buf[192];
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    const double t = t0 + static_cast<double>(i) * traj.dt;
    if (i < traj.controls.size()) {
      std::snprintf(buf, sizeof buf, "%.4f,%.9g,%.9g,%.9g,%.9g,%.9g\n", t, s.x, s.y, s.heading,
                    traj.controls[i].v, traj.controls[i].omega);
    } else {
      std::snprintf(buf, sizeof buf, "%.4f,%.9g,%.9g,%.9g,,\n", t, s.x, s.y, s.heading);
    }
    out << buf;
  }
}

}  // namespace ddpen::dynamics
