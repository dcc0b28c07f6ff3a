#pragma once

#include "cito/bcd.hpp"

#include <limits>

namespace cito {

struct AulaConfig {
  double kappa_min = -1e6;
  double kappa_max = 1e6;
  double mu_max = 1e6;
  double gamma = 1.1;  // penalty growth factor, > 1
  double eta = 0.9;    // required violation decrease factor, in [0, 1]
  double rho_h0 = 1.0;
  double rho_g0 = 1.0;
  double rho_max = 1e8;
  double eps_w = 1e-5;  // outer step tolerance
  double eps_g = 1e-5;  // inequality tolerance
  double eps_h = 1e-5;  // equality tolerance (includes the slack-consistency rows)
  int max_outer = 1000;
  long max_total_sweeps = 2000;  // failure budget over all inner solves
  // Optional geometric decay of the inner stagnation tolerance; 1.0 keeps the
  // per-task fixed tolerance.
  double inner_tol_decay = 1.0;
  double inner_tol_min = 1e-12;

  void validate() const;
};

enum class SolveStatus { kConverged, kMaxOuterReached, kInnerDiverged };

const char* to_string(SolveStatus s);

struct OuterRecord {
  int outer = 0;
  double zeta_inf = 0;   // ||min(mu_new, -g)||_inf after the multiplier update
  double hbar_inf = 0;   // ||hbar(w)||_inf after the inner solve
  double rho_h = 0;      // penalty used by this iteration's subproblem
  double phi = 0;        // subproblem objective at the inner solution
  double dw_inf = 0;
  int sweeps = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxOuterReached;
  int outer_iters = 0;
  long total_sweeps = 0;
  FeasibilityReport final_feasibility;  // recomputed from X alone
  double wall_time_s = 0;
  double deriv_time_s = 0;
  std::vector<OuterRecord> history;
  std::vector<SweepRecord> sweep_log;
  VerticalState final_w;
  MultiplierState final_m;
};

// Component-wise clipping of the multipliers to the safeguard box.
MultiplierState safeguard_multipliers(const MultiplierState& m, const AulaConfig& cfg);

// First-order multiplier update; also returns zeta = min(mu_new, -g).
struct MultiplierUpdate {
  MultiplierState m;
  Vec zeta;
};
MultiplierUpdate update_multipliers(const MultiplierState& safeguarded, CVecRef hbar,
                                    CVecRef gvals);

// The pair of residuals the penalty rule monitors.
struct ResidualPair {
  double zeta_inf = 0;
  double hbar_inf = 0;
  double combined() const { return std::max(zeta_inf, hbar_inf); }
};

// Sufficient-decrease penalty rule: penalties grow by gamma (capped at
// rho_max) unless the combined violation max decreased by factor eta, or k=0.
MultiplierState update_penalties(const ResidualPair& prev, const ResidualPair& curr,
                                 const MultiplierState& m, const AulaConfig& cfg, int k);

// Safeguarded augmented-Lagrangian outer loop: safeguard, inner BCD solve
// (warm-started from the previous iterate), multiplier update, penalty rule.
// Terminates when ||dw||_inf < eps_w and ||(g)_+||_inf < eps_g and
// ||hbar||_inf < eps_h. ||dw||_inf at k=0 is +inf.
SolveReport aula_solve(const MpccProblem& p, CVecRef x_init, const AulaConfig& cfg,
                       const BcdConfig& bcd_cfg,
                       const std::function<void(const VerticalState&, const SweepRecord&)>&
                           on_sweep = nullptr);

namespace detail {
// Shared outer loop; extra_violation (if given) is evaluated on each candidate
// iterate and must also fall below its tolerance before convergence is
// declared. Used by the squared-penalty baseline for the complementarity
// product residual.
SolveReport aula_loop(const MpccProblem& p, CVecRef x_init, const AulaConfig& cfg,
                      const BcdConfig& bcd_cfg,
                      const std::function<double(const VerticalState&)>& extra_violation,
                      double extra_tol,
                      const std::function<void(const VerticalState&, const SweepRecord&)>&
                          on_sweep);
}  // namespace detail

}  // namespace cito
