#include "ddpen/ddp/optimizer.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace ddpen::ddp {
namespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat23 = Eigen::Matrix<double, 2, 3>;

struct Gains {
  std::vector<Vec2> k;
  std::vector<Mat23> K;
  double dv_linear = 0.0;
  double dv_quadratic = 0.0;
};

Vec3 state_delta(const State& a, const State& b) {
  return {a.x - b.x, a.y - b.y, normalize_angle(a.heading - b.heading)};
}

// False when Q_uu is not positive definite at this regularization.
bool backward_pass(const Trajectory& traj, const OptimizeContext& ctx,
                   const OptimizerSettings& settings, double mu, Gains& gains) {
  const std::size_t n = traj.controls.size();
  gains.k.assign(n, Vec2::Zero());
  gains.K.assign(n, Mat23::Zero());
  gains.dv_linear = 0.0;
  gains.dv_quadratic = 0.0;

  const CostDerivatives terminal = terminal_derivatives(traj.states[n], ctx);
  Vec3 vx = terminal.lx;
  Mat3 vxx = terminal.lxx;
  for (std::size_t ii = n; ii-- > 0;) {
    const State& s = traj.states[ii];
    const Control& u = traj.controls[ii];
    const CostDerivatives d = cost_derivatives(s, u, ctx, ii, n);
    const dynamics::Linearization lin = dynamics::linearize(s, u, settings.dt, settings.limits);

    const Vec3 qx = d.lx + lin.A.transpose() * vx;
    const Vec2 qu = d.lu + lin.B.transpose() * vx;
    const Mat3 qxx = d.lxx + lin.A.transpose() * vxx * lin.A;
    const Mat2 quu = d.luu + lin.B.transpose() * vxx * lin.B;
    const Mat23 qux = d.lux + lin.B.transpose() * vxx * lin.A;

    const Mat2 quu_reg = quu + mu * Mat2::Identity();
    const Eigen::LLT<Mat2> llt(quu_reg);
    if (llt.info() != Eigen::Success) {
      return false;
    }
    const Vec2 k = -llt.solve(qu);
    const Mat23 K = -llt.solve(qux);
    gains.k[ii] = k;
    gains.K[ii] = K;
    gains.dv_linear += k.dot(qu);
    gains.dv_quadratic += k.dot(quu * k);

    vx = qx + K.transpose() * quu * k + K.transpose() * qu + qux.transpose() * k;
    vxx = qxx + K.transpose() * quu * K + K.transpose() * qux + qux.transpose() * K;
    vxx = 0.5 * (vxx + vxx.transpose());
  }
  return true;
}

Trajectory forward_pass(const Trajectory& nominal, const Gains& gains, double alpha,
                        const OptimizerSettings& settings) {
  const std::size_t n = nominal.controls.size();
  Trajectory out;
  out.dt = settings.dt;
  out.states.reserve(n + 1);
  out.controls.reserve(n);
  out.states.push_back(nominal.states.front());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 dx = state_delta(out.states[i], nominal.states[i]);
    const Vec2 du = alpha * gains.k[i] + gains.K[i] * dx;
    const Control u = dynamics::clamp(
        {nominal.controls[i].v + du.x(), nominal.controls[i].omega + du.y()}, settings.limits);
    out.controls.push_back(u);
    out.states.push_back(dynamics::step(out.states[i], u, settings.dt, settings.limits));
  }
  return out;
}

}  // namespace

const char* to_string(OptimizeStatus status) {
  switch (status) {
    case OptimizeStatus::kConverged:
      return "converged";
    case OptimizeStatus::kMaxIterations:
      return "max_iterations";
    case OptimizeStatus::kNonFiniteCost:
      return "non_finite_cost";
    case OptimizeStatus::kRegularizationExhausted:
      return "regularization_exhausted";
  }
  return "unknown";
}

OptimizeReport optimize(const State& s0, std::span<const Control> initial_controls,
                        const OptimizeContext& ctx, const OptimizerSettings& settings) {
  if (initial_controls.empty()) {
    throw std::invalid_argument("optimize: empty initial control sequence");
  }
  ctx.params.validate();
  OptimizeReport report;
  try {
    report.trajectory = dynamics::rollout(s0, initial_controls, settings.dt, settings.limits);
  } catch (const dynamics::DynamicsError& e) {
    report.status = OptimizeStatus::kNonFiniteCost;
    report.diagnostic = std::string("initial rollout: ") + e.what();
    report.cost_trace.push_back(std::numeric_limits<double>::quiet_NaN());
    return report;
  }
  double cost = total_cost(report.trajectory, ctx);
  report.cost_trace.push_back(cost);
  if (!std::isfinite(cost)) {
    report.status = OptimizeStatus::kNonFiniteCost;
    report.diagnostic = "initial rollout cost is not finite";
    return report;
  }

  double mu = settings.mu_init;
  Gains gains;
  report.status = OptimizeStatus::kMaxIterations;
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    ++report.epochs;
    while (!backward_pass(report.trajectory, ctx, settings, mu, gains)) {
      mu *= settings.mu_increase;
      if (mu > settings.mu_max) {
        report.status = OptimizeStatus::kRegularizationExhausted;
        report.diagnostic = "Q_uu not positive definite at maximum regularization";
        return report;
      }
    }
    report.regularization_trace.push_back(mu);

    const double expected = -(gains.dv_linear + 0.5 * gains.dv_quadratic);
    IterationRecord rec;
    rec.iteration = iter;
    rec.mu = mu;
    if (expected < settings.relative_tolerance * std::abs(cost)) {
      rec.cost = cost;
      report.iterations.push_back(rec);
      report.cost_trace.push_back(cost);
      report.status = OptimizeStatus::kConverged;
      report.diagnostic = "expected improvement below tolerance";
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < settings.line_search_steps; ++ls, alpha *= 0.5) {
      Trajectory candidate;
      try {
        candidate = forward_pass(report.trajectory, gains, alpha, settings);
      } catch (const dynamics::DynamicsError& e) {
        report.status = OptimizeStatus::kNonFiniteCost;
        report.diagnostic = std::string("forward pass: ") + e.what();
        return report;
      }
      const double candidate_cost = total_cost(candidate, ctx);
      if (!std::isfinite(candidate_cost)) {
        report.status = OptimizeStatus::kNonFiniteCost;
        report.diagnostic = "forward pass produced a non-finite cost";
        return report;
      }
      if (candidate_cost < cost) {
        const double improvement = (cost - candidate_cost) / std::max(std::abs(cost), 1e-12);
        report.trajectory = std::move(candidate);
        assert(dynamics::is_rollout_consistent(report.trajectory, settings.limits));
        cost = candidate_cost;
        accepted = true;
        rec.alpha = alpha;
        rec.accepted = true;
        rec.cost = cost;
        report.iterations.push_back(rec);
        report.cost_trace.push_back(cost);
        ++report.accepted;
        mu = std::max(mu / settings.mu_decrease, 1e-12);
        if (improvement < settings.relative_tolerance) {
          report.status = OptimizeStatus::kConverged;
          report.diagnostic = "relative improvement below tolerance";
        }
        break;
      }
    }
    if (accepted) {
      if (report.status == OptimizeStatus::kConverged) {
        break;
      }
      continue;
    }
    rec.cost = cost;
    report.iterations.push_back(rec);
    report.cost_trace.push_back(cost);
    ++report.rejected;
    mu *= settings.mu_increase;
    if (mu > settings.mu_max) {
      report.status = OptimizeStatus::kConverged;
      report.diagnostic = "no descent step at maximum regularization";
      break;
    }
  }
  return report;
}

}  // namespace ddpen::ddp
