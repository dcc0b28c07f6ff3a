#include "cito/objective.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace cito {

namespace {

int max_of(const std::vector<int>& v) {
  int m = 0;
  for (int x : v) m = std::max(m, x);
  return m;
}

class DerivTimer {
 public:
  explicit DerivTimer(double* acc) : acc_(acc), t0_(std::chrono::steady_clock::now()) {}
  ~DerivTimer() {
    *acc_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  double* acc_;
  std::chrono::steady_clock::time_point t0_;
};

int find_nonfinite_row(CVecRef v) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) return i;
  }
  return -1;
}

}  // namespace

Workspace::Workspace(const MpccProblem& p) : layout_(p) {
  const int max_r = max_of(layout_.r_rows);
  const int max_h = max_of(layout_.h_rows);
  xbuf_.resize(p.n_x);
  rbuf_.resize(std::max(max_r, 1));
  hbuf_.resize(std::max(max_h, 1));
  gbuf_.resize(std::max(p.n_i, 1));
  Gbuf_.resize(std::max(p.n_c, 1));
  Hbuf_.resize(std::max(p.n_c, 1));
  Jr_.resize(std::max(max_r, 1), p.n_x);
  Jhx_.resize(std::max(max_h, 1), p.n_x);
  Jhn_.resize(std::max(max_h, 1), p.n_x);
  Jg_.resize(std::max(p.n_i, 1), p.n_x);
  JG_.resize(std::max(p.n_c, 1), p.n_x);
  JH_.resize(std::max(p.n_c, 1), p.n_x);
  const int max_self = max_r + max_h + 2 * p.n_c + p.n_i;
  Jself_.resize(std::max(max_self, 1), p.n_x);
  res_self_.resize(std::max(max_self, 1));
}

double GnBlockSystem::grad_inf_norm() const {
  double v = 0.0;
  for (const auto& g : grad) {
    if (g.size()) v = std::max(v, g.cwiseAbs().maxCoeff());
  }
  return v;
}

double Evaluator::phi_impl(const VerticalState& w, const MultiplierState& m,
                           bool throw_on_nan, bool* ok) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  if (w.X.size() != L.x_dim || w.Y.size() != L.pair_dim || w.Z.size() != L.pair_dim) {
    throw DimensionError("eval_phi: state does not match problem dimensions");
  }
  if (m.rho_h <= 0 || m.rho_g <= 0) {
    throw std::invalid_argument("eval_phi: penalties must be positive");
  }
  if (ok) *ok = true;
  const double inf = std::numeric_limits<double>::infinity();
  const Vec empty;
  double acc = 0.0;

  auto fail = [&](const char* where, int t, CVecRef buf) -> double {
    if (throw_on_nan) throw NumericalDomainError(where, t, find_nonfinite_row(buf));
    if (ok) *ok = false;
    return inf;
  };

  for (int t = 0; t < p.T; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);

    const int nr = L.r_rows[t];
    if (nr > 0) {
      auto rt = ws_.rbuf_.head(nr);
      p.r(t, xt, rt);
      if (!rt.allFinite()) return fail("r", t, rt);
      acc += 0.5 * rt.squaredNorm();
    }

    const int nh = L.h_rows[t];
    if (nh > 0) {
      auto ht = ws_.hbuf_.head(nh);
      if (t + 1 < p.T) {
        p.h(t, xt, w.X.segment((t + 1) * p.n_x, p.n_x), ht);
      } else {
        p.h(t, xt, empty, ht);
      }
      if (!ht.allFinite()) return fail("h", t, ht);
      auto kap = m.kappa.segment(L.eq_off[t], nh);
      acc += 0.5 * m.rho_h * (ht + kap / m.rho_h).squaredNorm();
    }

    if (p.n_c > 0) {
      auto Gt = ws_.Gbuf_.head(p.n_c);
      auto Ht = ws_.Hbuf_.head(p.n_c);
      p.G(t, xt, Gt);
      p.H(t, xt, Ht);
      if (!Gt.allFinite()) return fail("G", t, Gt);
      if (!Ht.allFinite()) return fail("H", t, Ht);
      auto kg = m.kappa.segment(L.kappa_g_off(t), p.n_c);
      auto kh = m.kappa.segment(L.kappa_h_off(t), p.n_c);
      auto yt = w.Y.segment(t * p.n_c, p.n_c);
      auto zt = w.Z.segment(t * p.n_c, p.n_c);
      acc += 0.5 * m.rho_h * (Gt - yt + kg / m.rho_h).squaredNorm();
      acc += 0.5 * m.rho_h * (Ht - zt + kh / m.rho_h).squaredNorm();
    }

    if (p.n_i > 0) {
      auto gt = ws_.gbuf_.head(p.n_i);
      p.g(t, xt, gt);
      if (!gt.allFinite()) return fail("g", t, gt);
      auto mut = m.mu.segment(t * p.n_i, p.n_i);
      acc += 0.5 * m.rho_g * (gt + mut / m.rho_g).cwiseMax(0.0).squaredNorm();
    }
  }
  return acc;
}

double Evaluator::phi(const VerticalState& w, const MultiplierState& m) const {
  return phi_impl(w, m, /*throw_on_nan=*/true, nullptr);
}

bool Evaluator::try_phi(const VerticalState& w, const MultiplierState& m,
                        double* value) const {
  bool ok = true;
  const double v = phi_impl(w, m, /*throw_on_nan=*/false, &ok);
  *value = v;
  return ok && std::isfinite(v);
}

void Evaluator::phi_gradient(const VerticalState& w, const MultiplierState& m, VecRef grad_x,
                             VecRef grad_y, VecRef grad_z) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  if (grad_x.size() != L.x_dim || grad_y.size() != L.pair_dim || grad_z.size() != L.pair_dim) {
    throw DimensionError("phi_gradient: bad output sizes");
  }
  DerivTimer timer(&ws_.deriv_time_s);
  grad_x.setZero();
  const Vec empty;

  for (int t = 0; t < p.T; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);
    auto gx = grad_x.segment(t * p.n_x, p.n_x);

    const int nr = L.r_rows[t];
    if (nr > 0) {
      auto rt = ws_.rbuf_.head(nr);
      auto Jr = ws_.Jr_.topRows(nr);
      p.r(t, xt, rt);
      if (!rt.allFinite()) throw NumericalDomainError("r", t, find_nonfinite_row(rt));
      p.r_jac(t, xt, Jr);
      gx.noalias() += Jr.transpose() * rt;
    }

    const int nh = L.h_rows[t];
    if (nh > 0) {
      auto ht = ws_.hbuf_.head(nh);
      auto Jhx = ws_.Jhx_.topRows(nh);
      auto Jhn = ws_.Jhn_.topRows(nh);
      Jhx.setZero();
      Jhn.setZero();
      if (t + 1 < p.T) {
        auto xn = w.X.segment((t + 1) * p.n_x, p.n_x);
        p.h(t, xt, xn, ht);
        p.h_jac(t, xt, xn, Jhx, Jhn);
      } else {
        p.h(t, xt, empty, ht);
        p.h_jac(t, xt, empty, Jhx, Jhn);
      }
      if (!ht.allFinite()) throw NumericalDomainError("h", t, find_nonfinite_row(ht));
      auto kap = m.kappa.segment(L.eq_off[t], nh);
      Vec v = m.rho_h * ht + kap;
      gx.noalias() += Jhx.transpose() * v;
      if (t + 1 < p.T) {
        grad_x.segment((t + 1) * p.n_x, p.n_x).noalias() += Jhn.transpose() * v;
      }
    }

    if (p.n_c > 0) {
      auto Gt = ws_.Gbuf_.head(p.n_c);
      auto Ht = ws_.Hbuf_.head(p.n_c);
      auto JG = ws_.JG_.topRows(p.n_c);
      auto JH = ws_.JH_.topRows(p.n_c);
      p.G(t, xt, Gt);
      p.H(t, xt, Ht);
      if (!Gt.allFinite()) throw NumericalDomainError("G", t, find_nonfinite_row(Gt));
      if (!Ht.allFinite()) throw NumericalDomainError("H", t, find_nonfinite_row(Ht));
      p.G_jac(t, xt, JG);
      p.H_jac(t, xt, JH);
      auto kg = m.kappa.segment(L.kappa_g_off(t), p.n_c);
      auto kh = m.kappa.segment(L.kappa_h_off(t), p.n_c);
      auto yt = w.Y.segment(t * p.n_c, p.n_c);
      auto zt = w.Z.segment(t * p.n_c, p.n_c);
      Vec vg = m.rho_h * (Gt - yt) + kg;
      Vec vh = m.rho_h * (Ht - zt) + kh;
      gx.noalias() += JG.transpose() * vg;
      gx.noalias() += JH.transpose() * vh;
      grad_y.segment(t * p.n_c, p.n_c) = -vg;
      grad_z.segment(t * p.n_c, p.n_c) = -vh;
    }

    if (p.n_i > 0) {
      auto gt = ws_.gbuf_.head(p.n_i);
      auto Jg = ws_.Jg_.topRows(p.n_i);
      p.g(t, xt, gt);
      if (!gt.allFinite()) throw NumericalDomainError("g", t, find_nonfinite_row(gt));
      p.g_jac(t, xt, Jg);
      auto mut = m.mu.segment(t * p.n_i, p.n_i);
      Vec v = (m.rho_g * gt + mut).cwiseMax(0.0);
      gx.noalias() += Jg.transpose() * v;
    }
  }
}

void Evaluator::gn_system(const VerticalState& w, const MultiplierState& m,
                          GnSystem* sys) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  DerivTimer timer(&ws_.deriv_time_s);

  const int rows_per_t_fixed = 2 * p.n_c + p.n_i;
  const int total_rows = L.res_dim + L.eq_dim + L.ineq_dim;
  sys->stack.resize(total_rows);
  const double sqrt_rh = std::sqrt(m.rho_h);
  const double sqrt_rg = std::sqrt(m.rho_g);
  const Vec empty;

  auto& trips = ws_.trips_;
  trips.clear();

  int row = 0;
  auto add_block = [&](int row0, int col0, const Mat& J, int nrows) {
    for (int i = 0; i < nrows; ++i) {
      for (int j = 0; j < p.n_x; ++j) {
        trips.emplace_back(row0 + i, col0 + j, J(i, j));
      }
    }
  };
  (void)rows_per_t_fixed;

  for (int t = 0; t < p.T; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);
    const int col = t * p.n_x;

    const int nr = L.r_rows[t];
    if (nr > 0) {
      auto rt = ws_.rbuf_.head(nr);
      auto Jr = ws_.Jr_.topRows(nr);
      p.r(t, xt, rt);
      if (!rt.allFinite()) throw NumericalDomainError("r", t, find_nonfinite_row(rt));
      p.r_jac(t, xt, Jr);
      sys->stack.segment(row, nr) = rt;
      add_block(row, col, ws_.Jr_, nr);
      row += nr;
    }

    const int nh = L.h_rows[t];
    if (nh > 0) {
      auto ht = ws_.hbuf_.head(nh);
      auto Jhx = ws_.Jhx_.topRows(nh);
      auto Jhn = ws_.Jhn_.topRows(nh);
      Jhx.setZero();
      Jhn.setZero();
      if (t + 1 < p.T) {
        auto xn = w.X.segment((t + 1) * p.n_x, p.n_x);
        p.h(t, xt, xn, ht);
        p.h_jac(t, xt, xn, Jhx, Jhn);
      } else {
        p.h(t, xt, empty, ht);
        p.h_jac(t, xt, empty, Jhx, Jhn);
      }
      if (!ht.allFinite()) throw NumericalDomainError("h", t, find_nonfinite_row(ht));
      auto kap = m.kappa.segment(L.eq_off[t], nh);
      sys->stack.segment(row, nh) = sqrt_rh * ht + kap / sqrt_rh;
      ws_.Jhx_.topRows(nh) *= sqrt_rh;
      add_block(row, col, ws_.Jhx_, nh);
      if (t + 1 < p.T) {
        ws_.Jhn_.topRows(nh) *= sqrt_rh;
        add_block(row, col + p.n_x, ws_.Jhn_, nh);
      }
      row += nh;
    }

    if (p.n_c > 0) {
      auto Gt = ws_.Gbuf_.head(p.n_c);
      auto Ht = ws_.Hbuf_.head(p.n_c);
      auto JG = ws_.JG_.topRows(p.n_c);
      auto JH = ws_.JH_.topRows(p.n_c);
      p.G(t, xt, Gt);
      p.H(t, xt, Ht);
      if (!Gt.allFinite()) throw NumericalDomainError("G", t, find_nonfinite_row(Gt));
      if (!Ht.allFinite()) throw NumericalDomainError("H", t, find_nonfinite_row(Ht));
      p.G_jac(t, xt, JG);
      p.H_jac(t, xt, JH);
      auto kg = m.kappa.segment(L.kappa_g_off(t), p.n_c);
      auto kh = m.kappa.segment(L.kappa_h_off(t), p.n_c);
      auto yt = w.Y.segment(t * p.n_c, p.n_c);
      auto zt = w.Z.segment(t * p.n_c, p.n_c);
      sys->stack.segment(row, p.n_c) = sqrt_rh * (Gt - yt) + kg / sqrt_rh;
      ws_.JG_.topRows(p.n_c) *= sqrt_rh;
      add_block(row, col, ws_.JG_, p.n_c);
      row += p.n_c;
      sys->stack.segment(row, p.n_c) = sqrt_rh * (Ht - zt) + kh / sqrt_rh;
      ws_.JH_.topRows(p.n_c) *= sqrt_rh;
      add_block(row, col, ws_.JH_, p.n_c);
      row += p.n_c;
    }

    if (p.n_i > 0) {
      auto gt = ws_.gbuf_.head(p.n_i);
      auto Jg = ws_.Jg_.topRows(p.n_i);
      p.g(t, xt, gt);
      if (!gt.allFinite()) throw NumericalDomainError("g", t, find_nonfinite_row(gt));
      p.g_jac(t, xt, Jg);
      auto mut = m.mu.segment(t * p.n_i, p.n_i);
      // Active iff g + mu/rho_g > 0 (strict); inactive rows stay structurally
      // present with zero value so the pattern is fixed.
      for (int i = 0; i < p.n_i; ++i) {
        const double shifted = gt[i] + mut[i] / m.rho_g;
        if (shifted > 0.0) {
          sys->stack[row + i] = sqrt_rg * shifted;
        } else {
          sys->stack[row + i] = 0.0;
          ws_.Jg_.row(i).setZero();
        }
      }
      ws_.Jg_.topRows(p.n_i) *= sqrt_rg;
      add_block(row, col, ws_.Jg_, p.n_i);
      row += p.n_i;
    }
  }

  sys->jac.resize(total_rows, L.x_dim);
  sys->jac.setFromTriplets(trips.begin(), trips.end());
}

void Evaluator::gn_block_system(const VerticalState& w, const MultiplierState& m,
                                GnBlockSystem* sys) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  DerivTimer timer(&ws_.deriv_time_s);

  const int T = p.T, nx = p.n_x;
  sys->diag.resize(T);
  sys->off.resize(std::max(T - 1, 0));
  sys->grad.resize(T);
  for (int t = 0; t < T; ++t) {
    sys->diag[t] = Mat::Zero(nx, nx);
    sys->grad[t] = Vec::Zero(nx);
    if (t + 1 < T) sys->off[t] = Mat::Zero(nx, nx);
  }
  sys->phi = 0.0;
  const double sqrt_rh = std::sqrt(m.rho_h);
  const double sqrt_rg = std::sqrt(m.rho_g);
  const Vec empty;

  for (int t = 0; t < T; ++t) {
    auto xt = w.X.segment(t * nx, nx);
    const int nh = L.h_rows[t];
    const int nr = L.r_rows[t];
    const int n_self = nr + nh + 2 * p.n_c + p.n_i;
    auto J = ws_.Jself_.topRows(n_self);
    auto res = ws_.res_self_.head(n_self);
    int row = 0;

    if (nr > 0) {
      auto rt = res.segment(row, nr);
      p.r(t, xt, rt);
      if (!rt.allFinite()) throw NumericalDomainError("r", t, find_nonfinite_row(rt));
      p.r_jac(t, xt, J.middleRows(row, nr));
      row += nr;
    }

    // h rows couple x_t and x_{t+1}; Jhn_ holds the x_{t+1} part.
    if (nh > 0) {
      auto ht = res.segment(row, nh);
      auto Jhx = J.middleRows(row, nh);
      auto Jhn = ws_.Jhn_.topRows(nh);
      Jhx.setZero();
      Jhn.setZero();
      if (t + 1 < T) {
        auto xn = w.X.segment((t + 1) * nx, nx);
        p.h(t, xt, xn, ht);
        p.h_jac(t, xt, xn, Jhx, Jhn);
      } else {
        p.h(t, xt, empty, ht);
        p.h_jac(t, xt, empty, Jhx, Jhn);
      }
      if (!ht.allFinite()) throw NumericalDomainError("h", t, find_nonfinite_row(ht));
      auto kap = m.kappa.segment(L.eq_off[t], nh);
      ht *= sqrt_rh;
      ht += kap / sqrt_rh;
      Jhx *= sqrt_rh;
      if (t + 1 < T) {
        auto JhnS = ws_.Jhn_.topRows(nh);
        JhnS *= sqrt_rh;
        sys->off[t].noalias() = Jhx.transpose() * JhnS;
        sys->diag[t + 1].noalias() += JhnS.transpose() * JhnS;
        sys->grad[t + 1].noalias() += JhnS.transpose() * ht;
      }
      row += nh;
    }

    if (p.n_c > 0) {
      auto Gt = res.segment(row, p.n_c);
      auto JG = J.middleRows(row, p.n_c);
      p.G(t, xt, Gt);
      if (!Gt.allFinite()) throw NumericalDomainError("G", t, find_nonfinite_row(Gt));
      p.G_jac(t, xt, JG);
      auto kg = m.kappa.segment(L.kappa_g_off(t), p.n_c);
      Gt -= w.Y.segment(t * p.n_c, p.n_c);
      Gt *= sqrt_rh;
      Gt += kg / sqrt_rh;
      JG *= sqrt_rh;
      row += p.n_c;

      auto Ht = res.segment(row, p.n_c);
      auto JH = J.middleRows(row, p.n_c);
      p.H(t, xt, Ht);
      if (!Ht.allFinite()) throw NumericalDomainError("H", t, find_nonfinite_row(Ht));
      p.H_jac(t, xt, JH);
      auto kh = m.kappa.segment(L.kappa_h_off(t), p.n_c);
      Ht -= w.Z.segment(t * p.n_c, p.n_c);
      Ht *= sqrt_rh;
      Ht += kh / sqrt_rh;
      JH *= sqrt_rh;
      row += p.n_c;
    }

    if (p.n_i > 0) {
      auto gt = res.segment(row, p.n_i);
      auto Jg = J.middleRows(row, p.n_i);
      p.g(t, xt, gt);
      if (!gt.allFinite()) throw NumericalDomainError("g", t, find_nonfinite_row(gt));
      p.g_jac(t, xt, Jg);
      auto mut = m.mu.segment(t * p.n_i, p.n_i);
      for (int i = 0; i < p.n_i; ++i) {
        const double shifted = gt[i] + mut[i] / m.rho_g;
        if (shifted > 0.0) {
          gt[i] = sqrt_rg * shifted;
        } else {
          gt[i] = 0.0;
          Jg.row(i).setZero();
        }
      }
      Jg *= sqrt_rg;
      row += p.n_i;
    }

    sys->diag[t].noalias() += J.transpose() * J;
    sys->grad[t].noalias() += J.transpose() * res;
    sys->phi += 0.5 * res.squaredNorm();
  }
}

void Evaluator::eval_hbar(const VerticalState& w, VecRef hbar) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  if (hbar.size() != L.eq_dim) throw DimensionError("eval_hbar: bad output size");
  const Vec empty;
  for (int t = 0; t < p.T; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);
    const int nh = L.h_rows[t];
    if (nh > 0) {
      auto ht = hbar.segment(L.eq_off[t], nh);
      if (t + 1 < p.T) {
        p.h(t, xt, w.X.segment((t + 1) * p.n_x, p.n_x), ht);
      } else {
        p.h(t, xt, empty, ht);
      }
    }
    if (p.n_c > 0) {
      auto Gt = ws_.Gbuf_.head(p.n_c);
      auto Ht = ws_.Hbuf_.head(p.n_c);
      p.G(t, xt, Gt);
      p.H(t, xt, Ht);
      hbar.segment(L.kappa_g_off(t), p.n_c) = Gt - w.Y.segment(t * p.n_c, p.n_c);
      hbar.segment(L.kappa_h_off(t), p.n_c) = Ht - w.Z.segment(t * p.n_c, p.n_c);
    }
  }
}

void Evaluator::eval_g(CVecRef X, VecRef gvals) const {
  const MpccProblem& p = p_;
  const ProblemLayout& L = ws_.layout_;
  if (gvals.size() != L.ineq_dim) throw DimensionError("eval_g: bad output size");
  for (int t = 0; t < p.T && p.n_i > 0; ++t) {
    auto gt = gvals.segment(t * p.n_i, p.n_i);
    p.g(t, X.segment(t * p.n_x, p.n_x), gt);
  }
}

Vec fd_phi_gradient(const MpccProblem& p, const VerticalState& w, const MultiplierState& m,
                    double step) {
  Workspace ws(p);
  Evaluator ev(p, ws);
  VerticalState wp = w;
  const int nx = static_cast<int>(w.X.size());
  const int nc = static_cast<int>(w.Y.size());
  Vec grad(nx + 2 * nc);
  auto central = [&](double* slot) {
    const double v0 = *slot;
    *slot = v0 + step;
    const double fp = ev.phi(wp, m);
    *slot = v0 - step;
    const double fm = ev.phi(wp, m);
    *slot = v0;
    return (fp - fm) / (2.0 * step);
  };
  for (int i = 0; i < nx; ++i) grad[i] = central(&wp.X[i]);
  for (int i = 0; i < nc; ++i) grad[nx + i] = central(&wp.Y[i]);
  for (int i = 0; i < nc; ++i) grad[nx + nc + i] = central(&wp.Z[i]);
  return grad;
}

}  // namespace cito
