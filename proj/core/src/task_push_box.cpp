#include "push_model.hpp"

#include <cmath>

namespace cito {

namespace {

using internal::PushCandidate;
using internal::PushModel;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigurationError("push_box: " + what);
}

}  // namespace

// Rectangular box of half-extents (a/2, b/2). Three contact candidates sit at
// the centers of the left, bottom, and right faces; each applies a force
// through the two edges of its polyhedral friction cone, so the cone bound
// holds by construction. Complementarity enforces single-candidate pushing:
// every edge intensity is complementary to the rival candidates' total
// activity, and the left/right facets exclude squeezing pairwise.
MpccProblem build_push_box(const TaskSpec& spec, const GoalSpec& goal) {
  require(spec.id == "push_box", "wrong task id: " + spec.id);
  require(spec.n_q == 3 && spec.n_u == 6 && spec.n_c == 10 && spec.n_e == 0 && spec.n_i == 0,
          "dimensions do not match the task table");
  require(std::abs(spec.dt - 0.05) < 1e-12 && std::abs(spec.mass - 0.1) < 1e-12 &&
              std::abs(spec.friction - 0.5) < 1e-12 && std::abs(spec.length_a - 0.3) < 1e-12 &&
              std::abs(spec.length_b - 0.4) < 1e-12,
          "physical parameters do not match the task table");
  require(std::abs(spec.stage_weight - 0.001) < 1e-12 &&
              std::abs(spec.final_weight - 100.0) < 1e-12,
          "cost weights do not match the task table");
  require(spec.horizon >= 1, "horizon must be positive");
  require(goal.start.size() == 3 && goal.goal.size() == 3, "goal must be (x, y, theta)");

  auto model = std::make_shared<PushModel>();
  model->spec = spec;
  model->q_start = goal.start;
  model->q_goal = goal.goal;
  const double a = spec.length_a, b = spec.length_b;
  model->cands = {
      PushCandidate{{-a / 2, 0.0}, {1.0, 0.0}, 0},   // left face
      PushCandidate{{0.0, -b / 2}, {0.0, 1.0}, 1},   // bottom face
      PushCandidate{{a / 2, 0.0}, {-1.0, 0.0}, 2},   // right face
  };
  model->finalize();

  // u = [f+L f-L f+B f-B f+R f-R]; s_i = f+_i + f-_i.
  Mat A = Mat::Zero(10, 6), B = Mat::Zero(10, 6);
  auto rival = [&](int cand) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(6);
    for (int c = 0; c < 3; ++c) {
      if (c == cand) continue;
      row[2 * c] = 1.0;
      row[2 * c + 1] = 1.0;
    }
    return row;
  };
  for (int c = 0; c < 3; ++c) {
    for (int e = 0; e < 2; ++e) {
      A(2 * c + e, 2 * c + e) = 1.0;
      B.row(2 * c + e) = rival(c);
    }
  }
  // Left/right anti-squeeze at facet level.
  const int lr[4][2] = {{0, 4}, {0, 5}, {1, 4}, {1, 5}};
  for (int k = 0; k < 4; ++k) {
    A(6 + k, lr[k][0]) = 1.0;
    B(6 + k, lr[k][1]) = 1.0;
  }
  model->A = A;
  model->B = B;

  return internal::make_push_problem(std::move(model), nullptr, nullptr, nullptr, nullptr);
}

}  // namespace cito
