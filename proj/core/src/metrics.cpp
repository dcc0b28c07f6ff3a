#include "cito/tasks.hpp"

#include <cmath>

namespace cito {

Vec pose_at(const TaskSpec& spec, CVecRef X, int t) {
  const int nx = spec.n_x();
  return X.segment(t * nx + spec.n_u, spec.n_q);
}

namespace {

// Constrained optimum of the toy objective over the complementarity cone
// union; ties keep the G branch.
Vec toy_axis_solution(const GoalSpec& goal) {
  const double mx = goal.goal[0], my = goal.goal[1];
  const double y1 = std::max(mx, 0.0);
  const double cost1 = (mx - y1) * (mx - y1) + my * my;
  const double z2 = std::max(my, 0.0);
  const double cost2 = mx * mx + (my - z2) * (my - z2);
  Vec p = Vec::Zero(2);
  if (cost1 <= cost2) {
    p[0] = y1;
  } else {
    p[1] = z2;
  }
  return p;
}

}  // namespace

TaskMetrics evaluate_metrics(const TaskSpec& spec, const SolveReport& report,
                             const GoalSpec& goal) {
  TaskMetrics m;
  m.sweeps = report.total_sweeps;
  m.wall_time_s = report.wall_time_s;

  const Vec goal_pose = (spec.id == "toy_2d") ? toy_axis_solution(goal) : goal.goal;
  const int T = spec.horizon;

  double err = 0.0;
  for (int t = 0; t < T; ++t) {
    err += (pose_at(spec, report.final_w.X, t) - goal_pose).squaredNorm();
  }
  m.tracking_error = err;
  m.goal_error_inf =
      (pose_at(spec, report.final_w.X, T - 1) - goal_pose).cwiseAbs().maxCoeff();

  // Stuck: the trajectory stops moving over the final 10% of the horizon while
  // still away from the goal.
  const double goal_tol = 1e-2;
  if (T >= 2) {
    const int tail = std::max(1, T / 10);
    double max_move = 0.0;
    for (int t = T - tail; t < T; ++t) {
      max_move = std::max(
          max_move,
          (pose_at(spec, report.final_w.X, t) - pose_at(spec, report.final_w.X, t - 1))
              .cwiseAbs()
              .maxCoeff());
    }
    m.stuck = max_move < 1e-4 && m.goal_error_inf > goal_tol;
  }

  // A run counts as successful when every constraint violation is at the
  // benchmark tolerance, the goal is reached, and the trajectory is not
  // stuck; runs cut off by the iteration budget with residual violations fail.
  const double feas_tol = 1e-5;
  const bool feasible = report.final_feasibility.eq_inf <= feas_tol &&
                        report.final_feasibility.ineq_inf <= feas_tol &&
                        report.final_feasibility.comp_inf <= feas_tol;
  m.success = report.status != SolveStatus::kInnerDiverged && feasible &&
              m.goal_error_inf <= goal_tol && !m.stuck;
  return m;
}

Vec push_step(const TaskSpec& spec, CVecRef q, CVecRef u) {
  if (spec.id != "push_box") {
    throw ConfigurationError("push_step: forward-simulation oracle covers push_box only");
  }
  // Independent reconstruction of the quasi-static step: cone-edge forces at
  // the left/bottom/right face centers, ellipsoidal limit-surface mobility.
  const double mu = spec.friction;
  const double s = std::sqrt(1.0 + mu * mu);
  const double a = spec.length_a, b = spec.length_b;
  const double rx[3] = {-a / 2, 0.0, a / 2};
  const double ry[3] = {0.0, -b / 2, 0.0};
  const double nx[3] = {1.0, 0.0, -1.0};
  const double ny[3] = {0.0, 1.0, 0.0};
  double Fx = 0, Fy = 0, tau = 0;
  for (int c = 0; c < 3; ++c) {
    const double tx = -ny[c], ty = nx[c];
    const double epx = (nx[c] + mu * tx) / s, epy = (ny[c] + mu * ty) / s;
    const double emx = (nx[c] - mu * tx) / s, emy = (ny[c] - mu * ty) / s;
    const double fp = u[2 * c], fm = u[2 * c + 1];
    const double fx = fp * epx + fm * emx;
    const double fy = fp * epy + fm * emy;
    Fx += fx;
    Fy += fy;
    tau += rx[c] * fy - ry[c] * fx;
  }
  const double mob_lin = spec.slide_speed / (spec.friction * spec.mass * spec.gravity);
  const double mob_ang = mob_lin / (spec.char_radius * spec.char_radius);
  const double c0 = std::cos(q[2]), s0 = std::sin(q[2]);
  Vec out(3);
  out[0] = q[0] + spec.dt * mob_lin * (c0 * Fx - s0 * Fy);
  out[1] = q[1] + spec.dt * mob_lin * (s0 * Fx + c0 * Fy);
  out[2] = q[2] + spec.dt * mob_ang * tau;
  return out;
}

}  // namespace cito
