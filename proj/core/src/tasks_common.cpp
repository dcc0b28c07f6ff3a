#include "cito/tasks.hpp"

#include <cmath>

namespace cito {

TaskSpec push_box_spec() {
  TaskSpec s;
  s.id = "push_box";
  s.dt = 0.05;
  s.horizon = 50;
  s.mass = 0.1;
  s.gravity = 9.81;
  s.friction = 0.5;
  s.length_a = 0.3;
  s.length_b = 0.4;
  s.stage_weight = 0.001;
  s.final_weight = 100.0;
  s.n_q = 3;
  s.n_u = 6;
  s.n_c = 10;
  s.n_e = 0;
  s.n_i = 0;
  s.char_radius = 0.15;
  s.slide_speed = 10.0;
  s.sample_len = 1.0;
  s.multiplier_safeguard = 1e6;
  s.rho_scale = 1.1;
  s.rho_init = 10.0;
  s.max_outer = 1000;
  s.outer_tol_h = 1e-5;
  s.outer_tol_comp = 1e-5;
  s.max_inner = 50;
  s.inner_tol = 1e-3;
  s.gn_max_iters = 50;
  s.gn_step_tol = 1e-6;
  s.gn_reg = 2e-5;
  return s;
}

TaskSpec push_t_spec() {
  TaskSpec s;
  s.id = "push_t";
  s.dt = 0.05;
  s.horizon = 50;
  s.mass = 0.1;
  s.gravity = 9.8;
  s.friction = 0.4;
  s.length_a = 0.05;
  s.stage_weight = 0.01;
  s.final_weight = 100.0;
  s.n_q = 3;
  s.n_u = 24;
  s.n_c = 43;
  s.n_e = 7;
  s.n_i = 4;
  s.char_radius = 0.08;
  s.slide_speed = 10.0;
  s.workspace_bound = 3.0;
  s.sample_len = 0.5;
  s.multiplier_safeguard = 1e6;
  s.rho_scale = 1.1;
  s.rho_init = 10.0;
  s.max_outer = 1000;
  s.outer_tol_h = 1e-5;
  s.outer_tol_comp = 1e-5;
  s.max_inner = 50;
  s.inner_tol = 1e-3;
  s.gn_max_iters = 200;
  s.gn_step_tol = 1e-6;
  s.gn_reg = 5e-5;
  return s;
}

TaskSpec cart_transport_spec() {
  TaskSpec s;
  s.id = "cart_transport";
  s.dt = 0.02;
  s.horizon = 300;
  s.mass = 0.1;   // payload m1
  s.mass2 = 0.2;  // cart m2
  s.gravity = 9.81;
  s.friction = 0.2;
  s.length_a = 1.0;
  s.stage_weight = 1e-6;
  s.final_weight = 5000.0;
  s.n_q = 4;
  s.n_u = 4;
  s.n_c = 3;
  s.n_e = 1;
  s.n_i = 4;
  s.force_max = 4.0;
  s.dyn_row_scale = 50.0;
  s.slip_vel_scale = 1.0;
  s.slip_eq_scale = 10.0;
  s.sample_len = 1.5;
  s.multiplier_safeguard = 1e6;
  s.rho_scale = 1.5;
  s.rho_init = 30.0;
  s.rho_cap = 300.0;
  s.eta = 0.99;
  s.outer_tol_w = 1e-4;
  s.max_outer = 1000;
  s.outer_tol_h = 1e-5;
  s.outer_tol_comp = 1e-5;
  s.max_inner = 10;
  s.inner_tol = 1e-3;
  s.gn_max_iters = 100;
  s.gn_step_tol = 1e-6;
  s.gn_reg = 1e-5;
  return s;
}

TaskSpec toy_2d_spec() {
  TaskSpec s;
  s.id = "toy_2d";
  s.dt = 1.0;
  s.horizon = 1;
  s.stage_weight = 1.0;
  s.final_weight = 1.0;
  s.n_q = 2;
  s.n_u = 0;
  s.n_c = 1;
  s.n_e = 0;
  s.n_i = 0;
  s.sample_len = 1.0;
  s.multiplier_safeguard = 1e6;
  s.rho_scale = 1.1;
  s.max_outer = 1000;
  s.outer_tol_h = 1e-5;
  s.outer_tol_comp = 1e-5;
  s.max_inner = 50;
  s.inner_tol = 1e-8;
  s.gn_max_iters = 50;
  s.gn_step_tol = 1e-10;
  s.gn_reg = 1e-8;
  return s;
}

bool is_known_task(const std::string& id) {
  return id == "push_box" || id == "push_t" || id == "cart_transport" || id == "toy_2d";
}

TaskSpec task_spec_by_id(const std::string& id) {
  if (id == "push_box") return push_box_spec();
  if (id == "push_t") return push_t_spec();
  if (id == "cart_transport") return cart_transport_spec();
  if (id == "toy_2d") return toy_2d_spec();
  throw ConfigurationError("unknown task id: " + id);
}

GoalSpec sample_goal(const TaskSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  GoalSpec gs;
  gs.seed = seed;
  if (spec.id == "push_box" || spec.id == "push_t") {
    const double len = spec.sample_len;
    gs.start = Vec::Zero(3);
    gs.goal = Vec::Zero(3);
    gs.goal[0] = rng.uniform(-0.5 * len, 2.0 * len);
    gs.goal[1] = rng.uniform(-0.5 * len, 2.0 * len);
    gs.goal[2] = rng.uniform(-1.5, 1.5);
  } else if (spec.id == "cart_transport") {
    // Load rests on the cart, so start/goal keep |load - cart| within 0.75*l.
    // The payload offset must change by at least 0.15*l between start and
    // goal so every drawn task genuinely requires stick-slip repositioning.
    gs.start = Vec::Zero(4);
    gs.goal = Vec::Zero(4);
    const double span = spec.sample_len;
    gs.start[1] = rng.uniform(-span, span);
    gs.goal[1] = rng.uniform(-span, span);
    const double off_start = rng.uniform(-0.75, 0.75) * spec.length_a;
    double off_goal = off_start;
    while (std::abs(off_goal - off_start) < 0.15 * spec.length_a) {
      off_goal = rng.uniform(-0.75, 0.75) * spec.length_a;
    }
    gs.start[0] = gs.start[1] + off_start;
    gs.goal[0] = gs.goal[1] + off_goal;
  } else if (spec.id == "toy_2d") {
    // "Goal" is the unconstrained minimizer, kept strictly inside the
    // infeasible quadrant.
    gs.start = Vec::Zero(2);
    gs.goal = Vec::Zero(2);
    gs.goal[0] = rng.uniform(0.2, 1.5);
    gs.goal[1] = rng.uniform(0.2, 1.5);
  } else {
    throw ConfigurationError("sample_goal: unknown task id: " + spec.id);
  }
  return gs;
}

MpccProblem build_task(const TaskSpec& spec, const GoalSpec& goal) {
  if (spec.id == "push_box") return build_push_box(spec, goal);
  if (spec.id == "push_t") return build_push_t(spec, goal);
  if (spec.id == "cart_transport") return build_cart_transport(spec, goal);
  if (spec.id == "toy_2d") return build_toy_2d(goal.goal[0], goal.goal[1]);
  throw ConfigurationError("build_task: unknown task id: " + spec.id);
}

AulaConfig make_aula_config(const TaskSpec& spec) {
  AulaConfig cfg;
  cfg.kappa_max = spec.multiplier_safeguard;
  cfg.kappa_min = -spec.multiplier_safeguard;
  cfg.mu_max = spec.multiplier_safeguard;
  cfg.gamma = spec.rho_scale;
  cfg.eta = spec.eta;
  cfg.rho_h0 = spec.rho_init;
  cfg.rho_g0 = spec.rho_init;
  cfg.rho_max = spec.rho_cap;
  cfg.eps_w = spec.outer_tol_w;
  cfg.eps_g = spec.outer_tol_h;
  cfg.eps_h = std::min(spec.outer_tol_h, spec.outer_tol_comp);
  cfg.max_outer = spec.max_outer;
  cfg.max_total_sweeps = 2000;
  return cfg;
}

BcdConfig make_bcd_config(const TaskSpec& spec) {
  BcdConfig cfg;
  cfg.max_sweeps = spec.max_inner;
  cfg.stagnation_tol = spec.inner_tol;
  cfg.gn_max_iters = spec.gn_max_iters;
  cfg.gn_step_tol = spec.gn_step_tol;
  cfg.gn_regularization = spec.gn_reg;
  return cfg;
}

}  // namespace cito
