#include "cito/bcd.hpp"

#include <cmath>

namespace cito {

void BcdConfig::validate() const {
  if (max_sweeps <= 0) throw std::invalid_argument("BcdConfig: max_sweeps must be positive");
  if (stagnation_tol <= 0) throw std::invalid_argument("BcdConfig: stagnation_tol must be positive");
  if (gn_max_iters <= 0) throw std::invalid_argument("BcdConfig: gn_max_iters must be positive");
  if (gn_step_tol <= 0) throw std::invalid_argument("BcdConfig: gn_step_tol must be positive");
  if (gn_regularization <= 0)
    throw std::invalid_argument("BcdConfig: gn_regularization must be positive");
  if (armijo_c1 <= 0 || armijo_c1 >= 1)
    throw std::invalid_argument("BcdConfig: armijo_c1 must lie in (0,1)");
  if (armijo_shrink <= 0 || armijo_shrink >= 1)
    throw std::invalid_argument("BcdConfig: armijo_shrink must lie in (0,1)");
  if (armijo_max_backtracks <= 0)
    throw std::invalid_argument("BcdConfig: armijo_max_backtracks must be positive");
}

GnWorkspace::GnWorkspace(const MpccProblem& p) { dx.resize(p.x_dim()); }

bool solve_gn_block(const GnBlockSystem& sys, double lambda, GnWorkspace& gws, Vec* dx) {
  const int T = static_cast<int>(sys.diag.size());
  if (T == 0) return true;
  const int nx = static_cast<int>(sys.diag[0].rows());
  gws.schur.resize(T);
  gws.gain.resize(std::max(T - 1, 0));
  gws.llt.resize(T);
  gws.fwd.resize(T);

  for (int t = 0; t < T; ++t) {
    gws.schur[t] = sys.diag[t];
    gws.schur[t].diagonal().array() += lambda;
    if (t > 0) gws.schur[t].noalias() -= sys.off[t - 1].transpose() * gws.gain[t - 1];
    gws.llt[t].compute(gws.schur[t]);
    if (gws.llt[t].info() != Eigen::Success) return false;
    if (t + 1 < T) gws.gain[t] = gws.llt[t].solve(sys.off[t]);

    Vec rhs = -sys.grad[t];
    if (t > 0) rhs.noalias() -= sys.off[t - 1].transpose() * gws.fwd[t - 1];
    gws.fwd[t] = gws.llt[t].solve(rhs);
    if (!gws.fwd[t].allFinite()) return false;
  }

  dx->resize(T * nx);
  dx->segment((T - 1) * nx, nx) = gws.fwd[T - 1];
  for (int t = T - 2; t >= 0; --t) {
    dx->segment(t * nx, nx) =
        gws.fwd[t] - gws.gain[t] * dx->segment((t + 1) * nx, nx);
  }
  return dx->allFinite();
}

GnStepInfo gn_x_update(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                       const BcdConfig& cfg, Workspace& ws, GnWorkspace& gws) {
  Evaluator ev(p, ws);
  GnStepInfo info;

  double phi_cur = 0.0;
  if (!ev.try_phi(w, m, &phi_cur)) {
    // Report the offending entry through the throwing path.
    ev.phi(w, m);
  }

  for (int it = 0; it < cfg.gn_max_iters; ++it) {
    ev.gn_block_system(w, m, &gws.bsys);
    if (it == 0) info.gx_inf_entry = gws.bsys.grad_inf_norm();

    // Damped normal equations; on a failed factorization the damping is
    // raised 10x, up to 5 times.
    double lambda = cfg.gn_regularization;
    bool solved = false;
    for (int attempt = 0; attempt <= 5 && !solved; ++attempt) {
      solved = solve_gn_block(gws.bsys, lambda, gws, &gws.dx);
      if (!solved) lambda *= 10.0;
    }
    if (!solved) {
      throw SingularSystemError("gn_x_update: normal equations singular after damping retries");
    }

    info.iters = it + 1;
    const double step_inf = gws.dx.cwiseAbs().maxCoeff();
    info.last_step_inf = step_inf;
    if (step_inf < cfg.gn_step_tol) {
      info.last_step_alpha = 0.0;
      break;
    }

    double slope = 0.0;
    for (int t = 0; t < p.T; ++t) {
      slope += gws.bsys.grad[t].dot(gws.dx.segment(t * p.n_x, p.n_x));
    }
    slope = std::abs(slope);

    double alpha = 1.0;
    bool accepted = false;
    int backtracks = 0;
    VerticalState trial = w;  // shares Y, Z values; X replaced per probe
    for (; backtracks <= cfg.armijo_max_backtracks; ++backtracks) {
      trial.X = w.X + alpha * gws.dx;
      double phi_trial = 0.0;
      if (ev.try_phi(trial, m, &phi_trial) &&
          phi_trial <= phi_cur - cfg.armijo_c1 * alpha * slope) {
        accepted = true;
        phi_cur = phi_trial;
        break;
      }
      alpha *= cfg.armijo_shrink;
    }
    info.last_backtracks = backtracks;
    if (!accepted) {
      info.zero_step = true;
      info.last_step_alpha = 0.0;
      break;
    }
    w.X = trial.X;
    info.last_step_alpha = alpha;
  }

  info.phi = phi_cur;
  return info;
}

std::pair<double, double> slack_pair_update(double G, double H, double kappa_G,
                                            double kappa_H, double rho_h) {
  const double sg = G + kappa_G / rho_h;
  const double sh = H + kappa_H / rho_h;
  // Candidate 1 keeps the y branch (z = 0), candidate 2 the z branch; the
  // smaller quadratic penalty contribution wins, ties go to the y branch.
  const double y1 = std::max(0.0, sg);
  const double cost1 = (sg - y1) * (sg - y1) + sh * sh;
  const double z2 = std::max(0.0, sh);
  const double cost2 = sg * sg + (sh - z2) * (sh - z2);
  if (cost1 <= cost2) return {y1, 0.0};
  return {0.0, z2};
}

void slack_update(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                  Workspace& ws) {
  if (p.n_c == 0) return;
  const ProblemLayout& L = ws.layout();
  Vec Gv(p.n_c), Hv(p.n_c);
  for (int t = 0; t < p.T; ++t) {
    auto xt = w.X.segment(t * p.n_x, p.n_x);
    p.G(t, xt, Gv);
    p.H(t, xt, Hv);
    for (int i = 0; i < p.n_c; ++i) {
      const double kg = m.kappa[L.kappa_g_off(t) + i];
      const double kh = m.kappa[L.kappa_h_off(t) + i];
      const auto [y, z] = slack_pair_update(Gv[i], Hv[i], kg, kh, m.rho_h);
      w.Y[t * p.n_c + i] = y;
      w.Z[t * p.n_c + i] = z;
    }
  }
}

BcdResult bcd_solve(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                    const BcdConfig& cfg, Workspace& ws, GnWorkspace& gws,
                    const std::function<void(const VerticalState&, const SweepRecord&)>&
                        on_sweep) {
  cfg.validate();
  Evaluator ev(p, ws);
  BcdResult res;

  double phi_prev = 0.0;
  if (!ev.try_phi(w, m, &phi_prev)) {
    res.status = BcdStatus::kDiverged;
    return res;
  }

  res.status = BcdStatus::kMaxSweeps;
  for (int j = 0; j < cfg.max_sweeps; ++j) {
    GnStepInfo step = gn_x_update(p, w, m, cfg, ws, gws);
    slack_update(p, w, m, ws);

    double phi_new = 0.0;
    if (!ev.try_phi(w, m, &phi_new)) {
      res.status = BcdStatus::kDiverged;
      return res;
    }

    SweepRecord rec;
    rec.sweep = j;
    rec.phi_before = phi_prev;
    rec.phi_after = phi_new;
    rec.dphi = phi_prev - phi_new;
    rec.gx_inf = step.gx_inf_entry;
    rec.step_len = step.last_step_alpha;
    rec.backtracks = step.last_backtracks;
    rec.gn_iters = step.iters;
    res.trace.sweeps.push_back(rec);
    if (on_sweep) on_sweep(w, rec);

    if (std::abs(phi_prev - phi_new) <= cfg.stagnation_tol) {
      phi_prev = phi_new;
      res.status = BcdStatus::kStagnated;
      break;
    }
    phi_prev = phi_new;
  }

  res.phi = phi_prev;
  return res;
}

}  // namespace cito
