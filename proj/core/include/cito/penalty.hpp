#pragma once

#include "cito/aula.hpp"

namespace cito {

// Squared-penalty baseline. Slacks are dropped; each complementarity product
// enters the least-squares stack as sqrt(rho_c) * G_i(x_t) * H_i(x_t), and
// G >= 0, H >= 0 become explicit inequality rows handled by the same AuLa
// machinery. rho_c stays fixed.
struct PenaltyConfig {
  double rho_c = 1e6;  // complementarity penalty weight
  AulaConfig aula;
  BcdConfig bcd;

  void validate() const;
};

// Same outer loop and termination criteria as aula_solve, plus the
// complementarity product residual ||G.*H||_inf <= aula.eps_h before a run
// counts as converged.
SolveReport penalty_solve(const MpccProblem& p, CVecRef x_init, const PenaltyConfig& cfg,
                          const std::function<void(const VerticalState&, const SweepRecord&)>&
                              on_sweep = nullptr);

// The transformed smooth problem the baseline actually solves; exposed for
// tests.
MpccProblem make_penalty_problem(const MpccProblem& p, double rho_c);

}  // namespace cito
