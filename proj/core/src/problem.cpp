#include "cito/problem.hpp"

#include <cmath>

namespace cito {

ProblemLayout::ProblemLayout(const MpccProblem& p)
    : T(p.T), n_x(p.n_x), n_c(p.n_c), n_i(p.n_i) {
  x_dim = p.T * p.n_x;
  pair_dim = p.T * p.n_c;
  ineq_dim = p.T * p.n_i;
  h_rows.resize(p.T);
  r_rows.resize(p.T);
  r_off.resize(p.T);
  eq_off.resize(p.T);
  int eq = 0, res = 0;
  for (int t = 0; t < p.T; ++t) {
    h_rows[t] = p.h_rows ? p.h_rows(t) : 0;
    r_rows[t] = p.r_rows ? p.r_rows(t) : 0;
    eq_off[t] = eq;
    r_off[t] = res;
    eq += h_rows[t] + 2 * p.n_c;
    res += r_rows[t];
  }
  eq_dim = eq;
  res_dim = res;
}

MultiplierState make_zero_multipliers(const MpccProblem& p, double rho_h, double rho_g) {
  ProblemLayout layout(p);
  MultiplierState m;
  m.kappa = Vec::Zero(layout.eq_dim);
  m.mu = Vec::Zero(layout.ineq_dim);
  m.rho_h = rho_h;
  m.rho_g = rho_g;
  return m;
}

VerticalState assemble_vertical(const MpccProblem& p, CVecRef X) {
  if (X.size() != p.x_dim()) {
    throw DimensionError("assemble_vertical: X has length " + std::to_string(X.size()) +
                         ", expected " + std::to_string(p.x_dim()));
  }
  VerticalState w;
  w.X = X;
  w.Y = Vec::Zero(p.pair_dim());
  w.Z = Vec::Zero(p.pair_dim());
  if (p.n_c == 0) return w;

  Vec Gv(p.n_c), Hv(p.n_c);
  for (int t = 0; t < p.T; ++t) {
    auto xt = X.segment(t * p.n_x, p.n_x);
    p.G(t, xt, Gv);
    p.H(t, xt, Hv);
    for (int i = 0; i < p.n_c; ++i) {
      // Nearest point on {(y,0): y>=0} u {(0,z): z>=0} in squared distance;
      // ties keep the G branch.
      const double gy = std::max(Gv[i], 0.0);
      const double hz = std::max(Hv[i], 0.0);
      const double d_y = (Gv[i] - gy) * (Gv[i] - gy) + Hv[i] * Hv[i];
      const double d_z = Gv[i] * Gv[i] + (Hv[i] - hz) * (Hv[i] - hz);
      if (d_y <= d_z) {
        w.Y[t * p.n_c + i] = gy;
      } else {
        w.Z[t * p.n_c + i] = hz;
      }
    }
  }
  return w;
}

FeasibilityReport check_feasibility(const MpccProblem& p, CVecRef X) {
  if (X.size() != p.x_dim()) {
    throw DimensionError("check_feasibility: bad X length");
  }
  FeasibilityReport rep;
  Vec hv, gv(p.n_i), Gv(p.n_c), Hv(p.n_c);
  const Vec empty;
  for (int t = 0; t < p.T; ++t) {
    auto xt = X.segment(t * p.n_x, p.n_x);
    const int nh = p.h_rows ? p.h_rows(t) : 0;
    if (nh > 0) {
      hv.resize(nh);
      if (t + 1 < p.T) {
        p.h(t, xt, X.segment((t + 1) * p.n_x, p.n_x), hv);
      } else {
        p.h(t, xt, empty, hv);
      }
      rep.eq_inf = std::max(rep.eq_inf, hv.cwiseAbs().maxCoeff());
    }
    if (p.n_i > 0) {
      p.g(t, xt, gv);
      rep.ineq_inf = std::max(rep.ineq_inf, gv.cwiseMax(0.0).maxCoeff());
    }
    if (p.n_c > 0) {
      p.G(t, xt, Gv);
      p.H(t, xt, Hv);
      for (int i = 0; i < p.n_c; ++i) {
        double v = std::abs(Gv[i] * Hv[i]);
        v = std::max(v, std::max(-Gv[i], 0.0));
        v = std::max(v, std::max(-Hv[i], 0.0));
        rep.comp_inf = std::max(rep.comp_inf, v);
      }
    }
  }
  return rep;
}

FeasibilityReport check_vertical_feasibility(const MpccProblem& p, const VerticalState& w) {
  FeasibilityReport rep = check_feasibility(p, w.X);
  // Equality rows of the vertical form add G-y and H-z; complementarity on
  // the slacks themselves.
  Vec Gv(p.n_c), Hv(p.n_c);
  double comp = 0.0;
  for (int t = 0; t < p.T && p.n_c > 0; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);
    p.G(t, xt, Gv);
    p.H(t, xt, Hv);
    for (int i = 0; i < p.n_c; ++i) {
      const int k = t * p.n_c + i;
      rep.eq_inf = std::max(rep.eq_inf, std::abs(Gv[i] - w.Y[k]));
      rep.eq_inf = std::max(rep.eq_inf, std::abs(Hv[i] - w.Z[k]));
      double v = std::abs(w.Y[k] * w.Z[k]);
      v = std::max(v, std::max(-w.Y[k], 0.0));
      v = std::max(v, std::max(-w.Z[k], 0.0));
      comp = std::max(comp, v);
    }
  }
  rep.comp_inf = std::max(rep.comp_inf, comp);
  return rep;
}

namespace {

// Relative mismatch between an analytic block and its FD estimate.
double block_mismatch(const Mat& J, const Mat& J_fd) {
  const double scale = 1.0 + J.cwiseAbs().maxCoeff();
  return (J - J_fd).cwiseAbs().maxCoeff() / scale;
}

using ValueFn = std::function<void(CVecRef, VecRef)>;

Mat fd_jacobian(const ValueFn& f, CVecRef x, int rows, double step) {
  Mat J(rows, x.size());
  Vec xp = x, fp(rows), fm(rows);
  for (int j = 0; j < x.size(); ++j) {
    const double x0 = xp[j];
    xp[j] = x0 + step;
    f(xp, fp);
    xp[j] = x0 - step;
    f(xp, fm);
    xp[j] = x0;
    J.col(j) = (fp - fm) / (2.0 * step);
  }
  return J;
}

}  // namespace

double max_jacobian_mismatch(const MpccProblem& p, CVecRef X, double fd_step) {
  if (X.size() != p.x_dim()) throw DimensionError("max_jacobian_mismatch: bad X length");
  double worst = 0.0;
  const Vec empty;
  for (int t = 0; t < p.T; ++t) {
    const Vec xt = X.segment(t * p.n_x, p.n_x);
    const bool has_next = t + 1 < p.T;
    const Vec xn = has_next ? Vec(X.segment((t + 1) * p.n_x, p.n_x)) : Vec();

    const int nr = p.r_rows(t);
    if (nr > 0) {
      Mat J(nr, p.n_x);
      p.r_jac(t, xt, J);
      Mat J_fd = fd_jacobian([&](CVecRef x, VecRef out) { p.r(t, x, out); }, xt, nr, fd_step);
      worst = std::max(worst, block_mismatch(J, J_fd));
    }
    const int nh = p.h_rows(t);
    if (nh > 0) {
      Mat Jx(nh, p.n_x), Jn(nh, p.n_x);
      Jx.setZero();
      Jn.setZero();
      p.h_jac(t, xt, xn, Jx, Jn);
      Mat Jx_fd = fd_jacobian([&](CVecRef x, VecRef out) { p.h(t, x, xn, out); }, xt, nh, fd_step);
      worst = std::max(worst, block_mismatch(Jx, Jx_fd));
      if (has_next) {
        Mat Jn_fd =
            fd_jacobian([&](CVecRef x, VecRef out) { p.h(t, xt, x, out); }, xn, nh, fd_step);
        worst = std::max(worst, block_mismatch(Jn, Jn_fd));
      }
    }
    if (p.n_i > 0) {
      Mat J(p.n_i, p.n_x);
      p.g_jac(t, xt, J);
      Mat J_fd =
          fd_jacobian([&](CVecRef x, VecRef out) { p.g(t, x, out); }, xt, p.n_i, fd_step);
      worst = std::max(worst, block_mismatch(J, J_fd));
    }
    if (p.n_c > 0) {
      Mat J(p.n_c, p.n_x);
      p.G_jac(t, xt, J);
      Mat J_fd =
          fd_jacobian([&](CVecRef x, VecRef out) { p.G(t, x, out); }, xt, p.n_c, fd_step);
      worst = std::max(worst, block_mismatch(J, J_fd));
      p.H_jac(t, xt, J);
      J_fd = fd_jacobian([&](CVecRef x, VecRef out) { p.H(t, x, out); }, xt, p.n_c, fd_step);
      worst = std::max(worst, block_mismatch(J, J_fd));
    }
  }
  return worst;
}

}  // namespace cito
