#include "cito/aula.hpp"

#include <chrono>
#include <cmath>

namespace cito {

void AulaConfig::validate() const {
  if (kappa_min >= kappa_max)
    throw std::invalid_argument("AulaConfig: kappa_min must be below kappa_max");
  if (mu_max <= 0) throw std::invalid_argument("AulaConfig: mu_max must be positive");
  if (gamma <= 1.0) throw std::invalid_argument("AulaConfig: gamma must exceed 1");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("AulaConfig: eta must lie in [0,1]");
  if (rho_h0 <= 0 || rho_g0 <= 0)
    throw std::invalid_argument("AulaConfig: initial penalties must be positive");
  if (rho_max < rho_h0 || rho_max < rho_g0)
    throw std::invalid_argument("AulaConfig: rho_max below initial penalties");
  if (eps_w <= 0 || eps_g <= 0 || eps_h <= 0)
    throw std::invalid_argument("AulaConfig: tolerances must be positive");
  if (max_outer <= 0) throw std::invalid_argument("AulaConfig: max_outer must be positive");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxOuterReached: return "max_outer_reached";
    case SolveStatus::kInnerDiverged: return "inner_diverged";
  }
  return "unknown";
}

MultiplierState safeguard_multipliers(const MultiplierState& m, const AulaConfig& cfg) {
  MultiplierState out = m;
  out.kappa = m.kappa.cwiseMax(cfg.kappa_min).cwiseMin(cfg.kappa_max);
  out.mu = m.mu.cwiseMax(0.0).cwiseMin(cfg.mu_max);
  return out;
}

MultiplierUpdate update_multipliers(const MultiplierState& safeguarded, CVecRef hbar,
                                    CVecRef gvals) {
  MultiplierUpdate upd;
  upd.m = safeguarded;
  upd.m.kappa = safeguarded.kappa + safeguarded.rho_h * hbar;
  upd.m.mu = (safeguarded.mu + safeguarded.rho_g * gvals).cwiseMax(0.0);
  upd.zeta = upd.m.mu.cwiseMin(-gvals);
  return upd;
}

MultiplierState update_penalties(const ResidualPair& prev, const ResidualPair& curr,
                                 const MultiplierState& m, const AulaConfig& cfg, int k) {
  MultiplierState out = m;
  if (k == 0 || curr.combined() <= cfg.eta * prev.combined()) {
    return out;
  }
  out.rho_h = std::min(cfg.gamma * m.rho_h, cfg.rho_max);
  out.rho_g = std::min(cfg.gamma * m.rho_g, cfg.rho_max);
  return out;
}

namespace detail {

SolveReport aula_loop(const MpccProblem& p, CVecRef x_init, const AulaConfig& cfg,
                      const BcdConfig& bcd_cfg,
                      const std::function<double(const VerticalState&)>& extra_violation,
                      double extra_tol,
                      const std::function<void(const VerticalState&, const SweepRecord&)>&
                          on_sweep) {
  cfg.validate();
  bcd_cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();

  SolveReport report;
  VerticalState w = assemble_vertical(p, x_init);
  Workspace ws(p);
  Evaluator ev(p, ws);
  GnWorkspace gws(p);

  MultiplierState m = make_zero_multipliers(p, cfg.rho_h0, cfg.rho_g0);
  const ProblemLayout& L = ws.layout();
  Vec hbar(L.eq_dim), gvals(L.ineq_dim);

  double dw_inf = std::numeric_limits<double>::infinity();
  ResidualPair prev_res;
  double tau = bcd_cfg.stagnation_tol;
  report.status = SolveStatus::kMaxOuterReached;

  for (int k = 0; k < cfg.max_outer; ++k) {
    ev.eval_hbar(w, hbar);
    ev.eval_g(w.X, gvals);
    const double eq_viol = L.eq_dim ? hbar.cwiseAbs().maxCoeff() : 0.0;
    const double ineq_viol = L.ineq_dim ? gvals.cwiseMax(0.0).maxCoeff() : 0.0;
    const double extra = extra_violation ? extra_violation(w) : 0.0;
    if (dw_inf < cfg.eps_w && ineq_viol < cfg.eps_g && eq_viol < cfg.eps_h &&
        extra <= extra_tol) {
      report.status = SolveStatus::kConverged;
      break;
    }
    if (report.total_sweeps >= cfg.max_total_sweeps) {
      report.status = SolveStatus::kMaxOuterReached;
      break;
    }

    MultiplierState m_bar = safeguard_multipliers(m, cfg);

    BcdConfig inner_cfg = bcd_cfg;
    inner_cfg.stagnation_tol = tau;
    const VerticalState w_prev = w;
    BcdResult inner;
    try {
      inner = bcd_solve(p, w, m_bar, inner_cfg, ws, gws,
                        [&](const VerticalState& wi, const SweepRecord& rec) {
                          SweepRecord tagged = rec;
                          tagged.outer = k;
                          report.sweep_log.push_back(tagged);
                          if (on_sweep) on_sweep(wi, tagged);
                        });
    } catch (const SingularSystemError&) {
      report.status = SolveStatus::kInnerDiverged;
      report.outer_iters = k + 1;
      break;
    } catch (const NumericalDomainError&) {
      report.status = SolveStatus::kInnerDiverged;
      report.outer_iters = k + 1;
      break;
    }
    if (inner.status == BcdStatus::kDiverged) {
      report.status = SolveStatus::kInnerDiverged;
      report.outer_iters = k + 1;
      break;
    }
    report.total_sweeps += static_cast<long>(inner.trace.sweeps.size());

    dw_inf = 0.0;
    dw_inf = std::max(dw_inf, (w.X - w_prev.X).cwiseAbs().maxCoeff());
    if (w.Y.size()) {
      dw_inf = std::max(dw_inf, (w.Y - w_prev.Y).cwiseAbs().maxCoeff());
      dw_inf = std::max(dw_inf, (w.Z - w_prev.Z).cwiseAbs().maxCoeff());
    }

    ev.eval_hbar(w, hbar);
    ev.eval_g(w.X, gvals);
    MultiplierUpdate upd = update_multipliers(m_bar, hbar, gvals);

    ResidualPair curr;
    curr.zeta_inf = upd.zeta.size() ? upd.zeta.cwiseAbs().maxCoeff() : 0.0;
    curr.hbar_inf = hbar.size() ? hbar.cwiseAbs().maxCoeff() : 0.0;
    m = update_penalties(prev_res, curr, upd.m, cfg, k);
    prev_res = curr;

    OuterRecord rec;
    rec.outer = k;
    rec.zeta_inf = curr.zeta_inf;
    rec.hbar_inf = curr.hbar_inf;
    rec.rho_h = m_bar.rho_h;
    rec.phi = inner.phi;
    rec.dw_inf = dw_inf;
    rec.sweeps = static_cast<int>(inner.trace.sweeps.size());
    report.history.push_back(rec);
    report.outer_iters = k + 1;

    if (cfg.inner_tol_decay < 1.0) {
      tau = std::max(tau * cfg.inner_tol_decay, cfg.inner_tol_min);
    }
  }

  report.final_w = w;
  report.final_m = m;
  report.final_feasibility = check_feasibility(p, w.X);
  report.deriv_time_s = ws.deriv_time_s;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace detail

SolveReport aula_solve(const MpccProblem& p, CVecRef x_init, const AulaConfig& cfg,
                       const BcdConfig& bcd_cfg,
                       const std::function<void(const VerticalState&, const SweepRecord&)>&
                           on_sweep) {
  return detail::aula_loop(p, x_init, cfg, bcd_cfg, nullptr, 0.0, on_sweep);
}

}  // namespace cito
