#include "cito/tasks.hpp"

#include <cmath>
#include <memory>

namespace cito {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigurationError("cart_transport: " + what);
}

struct CartModel {
  TaskSpec spec;
  Vec q_start;  // (load x, cart y, load vel, cart vel)
  Vec q_goal;
  double fric_cap = 0;  // mu * m1 * g
  double ds = 1.0;      // dynamics-row scale
  double cv = 1.0;      // slip-velocity scale
  double ch = 1.0;      // friction-edge row scale

  // Semi-implicit step: velocities first, then positions with the new
  // velocities. u = (F, f_t, v+, v-), f_t the signed friction on the load.
  Eigen::Vector4d step(CVecRef q, CVecRef u) const {
    const double dt = spec.dt;
    Eigen::Vector4d out;
    out[2] = q[2] + dt * u[1] / spec.mass;
    out[3] = q[3] + dt * (u[0] - u[1]) / spec.mass2;
    out[0] = q[0] + dt * out[2];
    out[1] = q[1] + dt * out[3];
    return out;
  }
};

}  // namespace

// Payload on an actuated cart, coupled by stick-slip friction. State
// (load x, cart y, load velocity, cart velocity); controls
// (cart force F, signed friction f_t, slip-speed split v+, v-). The split is
// tied to the end-of-step relative velocity by the equality row
// v+ - v- = cv (vl - vc); the three complementarity pairs encode slip-right,
// slip-left, and stick:
//   0 <= v+ | (cap + f_t) >= 0,  0 <= v- | (cap - f_t) >= 0,  0 <= v+ | v- >= 0.
// Sliding forces the friction to the matching cone edge; sticking keeps
// |f_t| <= cap with zero slip.
MpccProblem build_cart_transport(const TaskSpec& spec, const GoalSpec& start_goal) {
  require(spec.id == "cart_transport", "wrong task id: " + spec.id);
  require(spec.n_q == 4 && spec.n_u == 4 && spec.n_c == 3 && spec.n_e == 1 && spec.n_i == 4,
          "dimensions do not match the task table");
  require(std::abs(spec.mass - 0.1) < 1e-12 && std::abs(spec.mass2 - 0.2) < 1e-12 &&
              std::abs(spec.friction - 0.2) < 1e-12 && std::abs(spec.length_a - 1.0) < 1e-12 &&
              std::abs(spec.dt - 0.02) < 1e-12,
          "physical parameters do not match the task table");
  require(std::abs(spec.stage_weight - 1e-6) < 1e-18 &&
              std::abs(spec.final_weight - 5000.0) < 1e-9,
          "cost weights do not match the task table");
  require(spec.horizon >= 1, "horizon must be positive");
  require(start_goal.start.size() == 4 && start_goal.goal.size() == 4,
          "start/goal must be (load x, cart y, load vel, cart vel)");

  auto m = std::make_shared<CartModel>();
  m->spec = spec;
  m->q_start = start_goal.start;
  m->q_goal = start_goal.goal;
  m->fric_cap = spec.friction * spec.mass * spec.gravity;
  m->ds = spec.dyn_row_scale;
  m->cv = spec.slip_vel_scale;
  m->ch = spec.fric_row_scale;

  MpccProblem p;
  p.T = spec.horizon;
  p.n_x = spec.n_u + spec.n_q;  // [u (4); q_{t+1} (4)]
  p.n_c = 3;
  p.n_e = 1;
  p.n_i = 4;

  const int T = p.T, nu = 4, nq = 4;
  const double sw = std::sqrt(spec.stage_weight);
  const double fw = std::sqrt(spec.final_weight);

  p.r_rows = [T](int t) { return t == T - 1 ? 8 : 4; };
  p.h_rows = [T](int t) {
    if (T == 1) return 1;
    if (t == 0) return 2 * 4 + 1;
    if (t == T - 1) return 1;
    return 4 + 1;
  };

  p.r = [m, sw, fw, T](int t, CVecRef x, VecRef out) {
    out.head(4) = sw * x.head(4);
    if (t == T - 1) out.segment(4, 4) = fw * (x.segment(4, 4) - m->q_goal);
  };
  p.r_jac = [sw, fw, T](int t, CVecRef, MatRef J) {
    J.setZero();
    J.block(0, 0, 4, 4).diagonal().setConstant(sw);
    if (t == T - 1) J.block(4, 4, 4, 4).diagonal().setConstant(fw);
  };

  // d step / d q and d step / d u.
  const double dt = spec.dt;
  const double dtm1 = dt / spec.mass;
  const double dtm2 = dt / spec.mass2;
  Mat Sq = Mat::Identity(4, 4);
  Sq(0, 2) = dt;
  Sq(1, 3) = dt;
  Mat Su = Mat::Zero(4, 4);
  Su(2, 1) = dtm1;
  Su(3, 0) = dtm2;
  Su(3, 1) = -dtm2;
  Su(0, 1) = dt * dtm1;
  Su(1, 0) = dt * dtm2;
  Su(1, 1) = -dt * dtm2;
  auto Sq_p = std::make_shared<Mat>(Sq);
  auto Su_p = std::make_shared<Mat>(Su);

  // Slip-decomposition row; x = (F, f_t, v+, v-, px, py, vl, vc).
  const double se = spec.slip_eq_scale;
  auto slip_row = [m, se](CVecRef x) { return se * (x[2] - x[3] - m->cv * (x[6] - x[7])); };

  p.h = [m, slip_row, nu, nq, T](int t, CVecRef x, CVecRef xn, VecRef out) {
    int row = 0;
    if (T > 1) {
      if (t == 0) {
        out.segment(row, nq) = m->ds * (x.segment(nu, nq) - m->step(m->q_start, x.head(nu)));
        row += nq;
      }
      if (t < T - 1) {
        out.segment(row, nq) =
            m->ds * (xn.segment(nu, nq) - m->step(x.segment(nu, nq), xn.head(nu)));
        row += nq;
      }
    }
    out[row] = slip_row(x);
  };
  p.h_jac = [m, Sq_p, Su_p, se, nu, nq, T](int t, CVecRef, CVecRef, MatRef Jx, MatRef Jn) {
    int row = 0;
    const double ds = m->ds;
    if (T > 1) {
      if (t == 0) {
        Jx.block(row, 0, nq, nu) = -ds * *Su_p;
        Jx.block(row, nu, nq, nq) = ds * Mat::Identity(nq, nq);
        row += nq;
      }
      if (t < T - 1) {
        Jx.block(row, nu, nq, nq) = -ds * *Sq_p;
        Jn.block(row, 0, nq, nu) = -ds * *Su_p;
        Jn.block(row, nu, nq, nq) = ds * Mat::Identity(nq, nq);
        row += nq;
      }
    }
    Jx(row, 2) = se;
    Jx(row, 3) = -se;
    Jx(row, 6) = -se * m->cv;
    Jx(row, 7) = se * m->cv;
  };

  p.G = [](int, CVecRef x, VecRef out) {
    out[0] = x[2];
    out[1] = x[3];
    out[2] = x[2];
  };
  p.G_jac = [](int, CVecRef, MatRef J) {
    J.setZero();
    J(0, 2) = 1.0;
    J(1, 3) = 1.0;
    J(2, 2) = 1.0;
  };
  p.H = [m](int, CVecRef x, VecRef out) {
    out[0] = m->ch * (m->fric_cap + x[1]);
    out[1] = m->ch * (m->fric_cap - x[1]);
    out[2] = x[3];
  };
  p.H_jac = [m](int, CVecRef, MatRef J) {
    J.setZero();
    J(0, 1) = m->ch;
    J(1, 1) = -m->ch;
    J(2, 3) = 1.0;
  };

  const double half_span = spec.length_a;  // load-on-cart bound |x - y| <= l
  const double fmax = spec.force_max;
  p.g = [half_span, fmax](int, CVecRef x, VecRef out) {
    out[0] = (x[4] - x[5]) - half_span;
    out[1] = -(x[4] - x[5]) - half_span;
    out[2] = x[0] - fmax;
    out[3] = -x[0] - fmax;
  };
  p.g_jac = [](int, CVecRef, MatRef J) {
    J.setZero();
    J(0, 4) = 1.0;
    J(0, 5) = -1.0;
    J(1, 4) = -1.0;
    J(1, 5) = 1.0;
    J(2, 0) = 1.0;
    J(3, 0) = -1.0;
  };

  return p;
}

Vec cart_lcp_step(const TaskSpec& spec, CVecRef q, double F) {
  // Stick force that equalizes the next velocities; clamping to the friction
  // cap solves the one-dimensional LCP exactly.
  const double m1 = spec.mass, m2 = spec.mass2, dt = spec.dt;
  const double cap = spec.friction * m1 * spec.gravity;
  const double f_stick = ((q[3] - q[2]) / dt + F / m2) / (1.0 / m1 + 1.0 / m2);
  const double f = std::min(std::max(f_stick, -cap), cap);
  Vec out(4);
  out[2] = q[2] + dt * f / m1;
  out[3] = q[3] + dt * (F - f) / m2;
  out[0] = q[0] + dt * out[2];
  out[1] = q[1] + dt * out[3];
  return out;
}

}  // namespace cito
