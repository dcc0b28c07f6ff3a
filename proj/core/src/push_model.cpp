#include "push_model.hpp"

namespace cito::internal {

MpccProblem make_push_problem(
    std::shared_ptr<const PushModel> model,
    std::function<void(const PushModel&, CVecRef u, VecRef out)> extra_eq,
    std::function<void(const PushModel&, CVecRef u, MatRef J)> extra_eq_jac,
    std::function<void(const PushModel&, CVecRef x, VecRef out)> ineq,
    std::function<void(const PushModel&, CVecRef x, MatRef J)> ineq_jac) {
  const TaskSpec& s = model->spec;
  MpccProblem p;
  p.T = s.horizon;
  p.n_x = s.n_u + s.n_q;
  p.n_c = s.n_c;
  p.n_e = s.n_e;
  p.n_i = s.n_i;

  const int T = p.T, nu = s.n_u, nq = s.n_q, ne = s.n_e;
  const double dt = s.dt;
  const double sw = std::sqrt(s.stage_weight);
  const double fw = std::sqrt(s.final_weight);
  auto m = std::move(model);

  p.r_rows = [nu, nq, T](int t) { return t == T - 1 ? nu + nq : nu; };
  p.h_rows = [nq, ne, T](int t) {
    if (T == 1) return ne;
    if (t == 0) return 2 * nq + ne;
    if (t == T - 1) return ne;
    return nq + ne;
  };

  p.r = [m, sw, fw, nu, nq, T](int t, CVecRef x, VecRef out) {
    out.head(nu) = sw * x.head(nu);
    if (t == T - 1) out.segment(nu, nq) = fw * (x.segment(nu, nq) - m->q_goal);
  };
  p.r_jac = [sw, fw, nu, nq, T](int t, CVecRef, MatRef J) {
    J.setZero();
    J.block(0, 0, nu, nu).diagonal().setConstant(sw);
    if (t == T - 1) J.block(nu, nu, nq, nq).diagonal().setConstant(fw);
  };

  p.h = [m, extra_eq, dt, nu, nq, ne, T](int t, CVecRef x, CVecRef xn, VecRef out) {
    int row = 0;
    if (T > 1) {
      if (t == 0) {
        out.segment(row, nq) =
            x.segment(nu, nq) - m->q_start - dt * m->vel(m->q_start[2], x.head(nu));
        row += nq;
      }
      if (t < T - 1) {
        out.segment(row, nq) =
            xn.segment(nu, nq) - x.segment(nu, nq) - dt * m->vel(x[nu + 2], xn.head(nu));
        row += nq;
      }
    }
    if (ne > 0) extra_eq(*m, x.head(nu), out.segment(row, ne));
  };
  p.h_jac = [m, extra_eq_jac, dt, nu, nq, ne, T](int t, CVecRef x, CVecRef xn, MatRef Jx,
                                                 MatRef Jn) {
    int row = 0;
    Mat dvu;
    Eigen::Vector3d dvth;
    if (T > 1) {
      if (t == 0) {
        m->vel_jac(m->q_start[2], x.head(nu), &dvu, &dvth);
        Jx.block(row, 0, nq, nu) = -dt * dvu;
        Jx.block(row, nu, nq, nq) = Mat::Identity(nq, nq);
        row += nq;
      }
      if (t < T - 1) {
        m->vel_jac(x[nu + 2], xn.head(nu), &dvu, &dvth);
        Jx.block(row, nu, nq, nq) = -Mat::Identity(nq, nq);
        Jx.block(row, nu + 2, nq, 1) -= dt * dvth;
        Jn.block(row, 0, nq, nu) = -dt * dvu;
        Jn.block(row, nu, nq, nq) = Mat::Identity(nq, nq);
        row += nq;
      }
    }
    if (ne > 0) extra_eq_jac(*m, x.head(nu), Jx.block(row, 0, ne, nu));
  };

  p.G = [m, nu](int, CVecRef x, VecRef out) { out = m->A * x.head(nu); };
  p.H = [m, nu](int, CVecRef x, VecRef out) { out = m->B * x.head(nu); };
  p.G_jac = [m, nu](int, CVecRef, MatRef J) {
    J.setZero();
    J.leftCols(nu) = m->A;
  };
  p.H_jac = [m, nu](int, CVecRef, MatRef J) {
    J.setZero();
    J.leftCols(nu) = m->B;
  };

  if (s.n_i > 0) {
    p.g = [m, ineq](int, CVecRef x, VecRef out) { ineq(*m, x, out); };
    p.g_jac = [m, ineq_jac](int, CVecRef x, MatRef J) { ineq_jac(*m, x, J); };
  } else {
    p.g = [](int, CVecRef, VecRef) {};
    p.g_jac = [](int, CVecRef, MatRef) {};
  }

  return p;
}

}  // namespace cito::internal
