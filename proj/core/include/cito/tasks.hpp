#pragma once

#include "cito/aula.hpp"
#include "cito/problem.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace cito {

// Deterministic uniform sampling independent of the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  double next_unit() {
    // splitmix64 step; top 53 bits as a double in [0, 1)
    s_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  std::uint64_t s_;
};

// Task configuration; every physical constant and weight is recorded in the
// per-task manifest file under manifests/.
struct TaskSpec {
  std::string id;
  double dt = 0;
  int horizon = 0;

  double mass = 0;        // box / T / payload mass m1
  double mass2 = 0;       // cart mass m2
  double gravity = 9.81;
  double friction = 0;
  double length_a = 0;  // characteristic lengths
  double length_b = 0;

  double stage_weight = 0;
  double final_weight = 0;

  int n_q = 0;  // pose/state dimension
  int n_u = 0;  // control dimension
  int n_c = 0;
  int n_e = 0;
  int n_i = 0;

  // Model constants fixed by this implementation (see manifests).
  double char_radius = 0;      // pressure-distribution radius of the limit surface
  double slide_speed = 1.0;    // quasi-static slide speed at the limit force, m/s
  double force_max = 0;        // cart actuation bound
  double dyn_row_scale = 1.0;  // scaling of the cart dynamics defect rows
  double slip_vel_scale = 1.0; // scaling of v_rel inside the slip rows
  double fric_row_scale = 1.0; // scaling of the friction-edge rows
  double slip_eq_scale = 1.0;  // scaling of the slip-decomposition equality row
  double workspace_bound = 0;  // push-T boundary box half-width
  double sample_len = 0;       // goal-sampling length scale

  // Solver parameters (task table).
  double multiplier_safeguard = 1e6;
  double rho_scale = 1.1;
  double rho_init = 1.0;
  double rho_cap = 1e8;
  double eta = 0.9;
  int max_outer = 1000;
  double outer_tol_h = 1e-5;
  double outer_tol_comp = 1e-5;
  double outer_tol_w = 1e-5;
  int max_inner = 50;
  double inner_tol = 1e-3;
  int gn_max_iters = 50;
  double gn_step_tol = 1e-6;
  double gn_reg = 2e-5;

  int n_x() const { return n_q + n_u; }
};

TaskSpec push_box_spec();
TaskSpec push_t_spec();
TaskSpec cart_transport_spec();
TaskSpec toy_2d_spec();
TaskSpec task_spec_by_id(const std::string& id);
bool is_known_task(const std::string& id);

// Start/goal pair in task coordinates; pushers use (x, y, theta), cart
// transport uses (load x, cart y, zero velocities).
struct GoalSpec {
  Vec start;
  Vec goal;
  std::uint64_t seed = 0;
};

GoalSpec sample_goal(const TaskSpec& spec, std::uint64_t seed);

// Builders. Each validates the spec against the task table and returns an
// immutable problem; callbacks capture the spec and goal by value.
MpccProblem build_push_box(const TaskSpec& spec, const GoalSpec& goal);
MpccProblem build_push_t(const TaskSpec& spec, const GoalSpec& goal);
MpccProblem build_cart_transport(const TaskSpec& spec, const GoalSpec& start_goal);
MpccProblem build_toy_2d();
// Toy objective with a configurable minimizer (used by the method-path study).
MpccProblem build_toy_2d(double min_x, double min_y);
MpccProblem build_task(const TaskSpec& spec, const GoalSpec& goal);

AulaConfig make_aula_config(const TaskSpec& spec);
BcdConfig make_bcd_config(const TaskSpec& spec);

struct TaskMetrics {
  bool success = false;
  double tracking_error = 0;  // sum_t of weighted squared pose error to goal
  long sweeps = 0;
  double wall_time_s = 0;
  double goal_error_inf = 0;
  bool stuck = false;
};

// Task-level success/error metrics for a finished solve. Success requires
// convergence, a final pose within 1e-2 (inf-norm, task units) of the goal,
// and no stuck trajectory (pose change < 1e-4 over the final 10% of the
// horizon while still away from the goal).
TaskMetrics evaluate_metrics(const TaskSpec& spec, const SolveReport& report,
                             const GoalSpec& goal);

// Pose at step t extracted from the trajectory block (pose component of x_t).
Vec pose_at(const TaskSpec& spec, CVecRef X, int t);

// Single-step forward simulation oracles used by the model tests.
// Push Box / Push T: pose increment from applying controls u at pose q.
Vec push_step(const TaskSpec& spec, CVecRef q, CVecRef u);
// Cart: next state from state q and cart force F, resolving stick/slip by
// case enumeration of the per-step friction LCP.
Vec cart_lcp_step(const TaskSpec& spec, CVecRef q, double F);

// Manifest I/O: human-readable "key = value" files.
using Manifest = std::map<std::string, std::string>;
Manifest task_manifest(const TaskSpec& spec);
TaskSpec apply_manifest(TaskSpec spec, const Manifest& overrides);
Manifest read_manifest(const std::string& path);
void write_manifest(const Manifest& m, const std::string& path);

}  // namespace cito
