#pragma once

// Internal quasi-static planar pushing model shared by the Push Box and
// Push T builders. The object slides on a table under an ellipsoidal limit
// surface: applied body wrench maps linearly to a body twist through
// (mob_lin, mob_lin, mob_ang). Contact forces act at fixed candidate points
// and are parameterized by the two friction-cone edge intensities
// (f_plus, f_minus) per candidate, so the polyhedral friction cone holds by
// construction. Both complementarity sides are linear forms of the controls.

#include "cito/problem.hpp"
#include "cito/tasks.hpp"

#include <Eigen/Dense>

#include <memory>

namespace cito::internal {

struct PushCandidate {
  Eigen::Vector2d r;  // contact point, body frame
  Eigen::Vector2d n;  // inward normal (push direction), body frame
  int face = 0;       // exclusivity group
};

struct PushModel {
  TaskSpec spec;
  Vec q_start;  // (x, y, theta)
  Vec q_goal;
  std::vector<PushCandidate> cands;
  double mu = 0;
  double mob_lin = 0;
  double mob_ang = 0;

  // Per-candidate cone-edge directions and their torque arms.
  std::vector<Eigen::Vector2d> e_plus, e_minus;
  std::vector<double> w_plus, w_minus;

  // Linear complementarity forms: G = A u, H = B u.
  Mat A, B;

  int n_u() const { return 2 * static_cast<int>(cands.size()); }

  void finalize() {
    mu = spec.friction;
    mob_lin = spec.slide_speed / (spec.friction * spec.mass * spec.gravity);
    mob_ang = mob_lin / (spec.char_radius * spec.char_radius);
    const double s = std::sqrt(1.0 + mu * mu);
    e_plus.clear();
    e_minus.clear();
    w_plus.clear();
    w_minus.clear();
    for (const auto& c : cands) {
      const Eigen::Vector2d t(-c.n.y(), c.n.x());
      const Eigen::Vector2d ep = (c.n + mu * t) / s;
      const Eigen::Vector2d em = (c.n - mu * t) / s;
      e_plus.push_back(ep);
      e_minus.push_back(em);
      w_plus.push_back(c.r.x() * ep.y() - c.r.y() * ep.x());
      w_minus.push_back(c.r.x() * em.y() - c.r.y() * em.x());
    }
  }

  // Body wrench (F, tau) from edge intensities.
  void wrench(CVecRef u, Eigen::Vector2d* F, double* tau) const {
    F->setZero();
    *tau = 0;
    for (size_t c = 0; c < cands.size(); ++c) {
      const double fp = u[2 * c], fm = u[2 * c + 1];
      *F += fp * e_plus[c] + fm * e_minus[c];
      *tau += fp * w_plus[c] + fm * w_minus[c];
    }
  }

  // World-frame pose rate at heading theta.
  Eigen::Vector3d vel(double theta, CVecRef u) const {
    Eigen::Vector2d F;
    double tau = 0;
    wrench(u, &F, &tau);
    const double cth = std::cos(theta), sth = std::sin(theta);
    Eigen::Vector3d v;
    v[0] = mob_lin * (cth * F.x() - sth * F.y());
    v[1] = mob_lin * (sth * F.x() + cth * F.y());
    v[2] = mob_ang * tau;
    return v;
  }

  // d vel / d u (3 x n_u) and d vel / d theta (3).
  void vel_jac(double theta, CVecRef u, Mat* dvu, Eigen::Vector3d* dvth) const {
    const double cth = std::cos(theta), sth = std::sin(theta);
    dvu->resize(3, n_u());
    for (size_t c = 0; c < cands.size(); ++c) {
      const Eigen::Vector2d& ep = e_plus[c];
      const Eigen::Vector2d& em = e_minus[c];
      (*dvu)(0, 2 * c) = mob_lin * (cth * ep.x() - sth * ep.y());
      (*dvu)(1, 2 * c) = mob_lin * (sth * ep.x() + cth * ep.y());
      (*dvu)(2, 2 * c) = mob_ang * w_plus[c];
      (*dvu)(0, 2 * c + 1) = mob_lin * (cth * em.x() - sth * em.y());
      (*dvu)(1, 2 * c + 1) = mob_lin * (sth * em.x() + cth * em.y());
      (*dvu)(2, 2 * c + 1) = mob_ang * w_minus[c];
    }
    Eigen::Vector2d F;
    double tau = 0;
    wrench(u, &F, &tau);
    (*dvth)[0] = mob_lin * (-sth * F.x() - cth * F.y());
    (*dvth)[1] = mob_lin * (cth * F.x() - sth * F.y());
    (*dvth)[2] = 0.0;
  }
};

// Wires a finished PushModel into an MpccProblem with the block layout
//   block 0:      [step 0; step 1; extra(x_0)]
//   block t<T-1:  [step t+1; extra(x_t)]
//   block T-1:    [extra(x_{T-1})]
// where step s couples poses q_s -> q_{s+1} with controls u_s, q_0 fixed.
// extra_* may be null for tasks without extra equality rows.
MpccProblem make_push_problem(
    std::shared_ptr<const PushModel> model,
    std::function<void(const PushModel&, CVecRef u, VecRef out)> extra_eq,
    std::function<void(const PushModel&, CVecRef u, MatRef J)> extra_eq_jac,
    std::function<void(const PushModel&, CVecRef x, VecRef out)> ineq,
    std::function<void(const PushModel&, CVecRef x, MatRef J)> ineq_jac);

}  // namespace cito::internal
