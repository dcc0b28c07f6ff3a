#include "cito/penalty.hpp"

#include <cmath>
#include <memory>

namespace cito {

void PenaltyConfig::validate() const {
  if (rho_c <= 0) throw std::invalid_argument("PenaltyConfig: rho_c must be positive");
  aula.validate();
  bcd.validate();
}

MpccProblem make_penalty_problem(const MpccProblem& p, double rho_c) {
  auto base = std::make_shared<MpccProblem>(p);
  const int nc = p.n_c;
  const double sqrt_rc = std::sqrt(rho_c);

  MpccProblem q = p;
  q.n_c = 0;
  q.n_i = p.n_i + 2 * nc;
  q.G = nullptr;
  q.H = nullptr;
  q.G_jac = nullptr;
  q.H_jac = nullptr;

  q.r_rows = [base](int t) { return base->r_rows(t) + base->n_c; };
  q.r = [base, sqrt_rc](int t, CVecRef x, VecRef out) {
    const int nr = base->r_rows(t);
    base->r(t, x, out.head(nr));
    if (base->n_c > 0) {
      Vec Gv(base->n_c), Hv(base->n_c);
      base->G(t, x, Gv);
      base->H(t, x, Hv);
      out.segment(nr, base->n_c) = sqrt_rc * Gv.cwiseProduct(Hv);
    }
  };
  q.r_jac = [base, sqrt_rc](int t, CVecRef x, MatRef J) {
    const int nr = base->r_rows(t);
    J.setZero();
    base->r_jac(t, x, J.topRows(nr));
    if (base->n_c > 0) {
      Vec Gv(base->n_c), Hv(base->n_c);
      Mat JG(base->n_c, base->n_x), JH(base->n_c, base->n_x);
      base->G(t, x, Gv);
      base->H(t, x, Hv);
      base->G_jac(t, x, JG);
      base->H_jac(t, x, JH);
      J.middleRows(nr, base->n_c) =
          sqrt_rc * (Hv.asDiagonal() * JG + Gv.asDiagonal() * JH);
    }
  };

  q.g = [base](int t, CVecRef x, VecRef out) {
    if (base->n_i > 0) base->g(t, x, out.head(base->n_i));
    if (base->n_c > 0) {
      Vec Gv(base->n_c), Hv(base->n_c);
      base->G(t, x, Gv);
      base->H(t, x, Hv);
      out.segment(base->n_i, base->n_c) = -Gv;
      out.segment(base->n_i + base->n_c, base->n_c) = -Hv;
    }
  };
  q.g_jac = [base](int t, CVecRef x, MatRef J) {
    J.setZero();
    if (base->n_i > 0) base->g_jac(t, x, J.topRows(base->n_i));
    if (base->n_c > 0) {
      Mat JG(base->n_c, base->n_x), JH(base->n_c, base->n_x);
      base->G_jac(t, x, JG);
      base->H_jac(t, x, JH);
      J.middleRows(base->n_i, base->n_c) = -JG;
      J.middleRows(base->n_i + base->n_c, base->n_c) = -JH;
    }
  };

  return q;
}

SolveReport penalty_solve(const MpccProblem& p, CVecRef x_init, const PenaltyConfig& cfg,
                          const std::function<void(const VerticalState&, const SweepRecord&)>&
                              on_sweep) {
  cfg.validate();
  MpccProblem smooth = make_penalty_problem(p, cfg.rho_c);

  auto base = std::make_shared<MpccProblem>(p);
  auto comp_violation = [base](const VerticalState& w) {
    if (base->n_c == 0) return 0.0;
    double worst = 0.0;
    Vec Gv(base->n_c), Hv(base->n_c);
    for (int t = 0; t < base->T; ++t) {
      auto xt = w.X.segment(t * base->n_x, base->n_x);
      base->G(t, xt, Gv);
      base->H(t, xt, Hv);
      worst = std::max(worst, Gv.cwiseProduct(Hv).cwiseAbs().maxCoeff());
    }
    return worst;
  };

  SolveReport report = detail::aula_loop(smooth, x_init, cfg.aula, cfg.bcd, comp_violation,
                                         cfg.aula.eps_h, on_sweep);
  // Report feasibility of the original problem, complementarity included.
  report.final_feasibility = check_feasibility(p, report.final_w.X);
  return report;
}

}  // namespace cito
