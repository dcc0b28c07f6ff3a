#pragma once

#include "cito/objective.hpp"
#include "cito/problem.hpp"

#include <Eigen/Cholesky>

#include <functional>

namespace cito {

struct BcdConfig {
  int max_sweeps = 50;             // inner iteration cap per subproblem
  double stagnation_tol = 1e-3;    // tau_k: stop when |dPhi| falls below
  int gn_max_iters = 50;           // Gauss-Newton iterations per X-update
  double gn_step_tol = 1e-6;       // stop X-update when step inf-norm falls below
  double gn_regularization = 2e-5; // lambda added to J^T J
  double armijo_c1 = 1e-4;
  double armijo_shrink = 0.5;
  int armijo_max_backtracks = 30;

  void validate() const;
};

// One completed BCD sweep: X-update followed by the exact slack update.
struct SweepRecord {
  int outer = 0;          // outer iteration this sweep belongs to
  int sweep = 0;          // sweep index within the inner solve
  double phi_before = 0;  // Phi at the completed iterate entering the sweep
  double phi_after = 0;
  double dphi = 0;          // phi_before - phi_after (>= 0 up to roundoff)
  double gx_inf = 0;        // ||grad_X Phi||_inf at the iterate entering the sweep
  double step_len = 0;      // last accepted Armijo step length of the X-update
  int backtracks = 0;       // backtracks in the last accepted GN iteration
  int gn_iters = 0;         // GN iterations taken by the X-update
};

struct SweepTrace {
  std::vector<SweepRecord> sweeps;
};

struct GnStepInfo {
  int iters = 0;
  double last_step_inf = 0.0;
  double last_step_alpha = 0.0;
  int last_backtracks = 0;
  bool zero_step = false;     // no Armijo step accepted; X returned unchanged
  double gx_inf_entry = 0.0;  // ||J^T stack||_inf at the entry iterate
  double phi = 0.0;           // Phi after the update
};

enum class BcdStatus { kStagnated, kMaxSweeps, kDiverged };

struct BcdResult {
  BcdStatus status = BcdStatus::kStagnated;
  SweepTrace trace;
  double phi = 0.0;
};

// Scratch for the damped GN solve; reusable across sweeps and outer iterations.
class GnWorkspace {
 public:
  explicit GnWorkspace(const MpccProblem& p);
  GnBlockSystem bsys;
  std::vector<Mat> schur;                // Schur complements per step
  std::vector<Mat> gain;                 // S_t^{-1} O_t
  std::vector<Eigen::LLT<Mat>> llt;
  std::vector<Vec> fwd;                  // forward-substituted RHS
  Vec dx;
};

// Solves (block-tridiagonal J^T J + lambda I) dx = -grad by block Cholesky
// elimination over the time steps. Returns false when a Schur block fails to
// factorize.
bool solve_gn_block(const GnBlockSystem& sys, double lambda, GnWorkspace& gws, Vec* dx);

// Damped Gauss-Newton pass on the X block with Armijo backtracking; (Y, Z)
// held fixed. Solves (J^T J + lambda I) dx = -J^T stack per iteration; on
// factorization failure, lambda is raised 10x up to 5 times before
// SingularSystemError.
GnStepInfo gn_x_update(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                       const BcdConfig& cfg, Workspace& ws, GnWorkspace& gws);

// Exact minimization of the slack pair block over the complementarity cone
// union, independently per pair; ties pick the y branch. Needs X fixed.
void slack_update(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                  Workspace& ws);

// Per-pair closed-form slack choice; exposed for direct testing against the
// grid oracle. Returns the chosen (y, z).
std::pair<double, double> slack_pair_update(double G, double H, double kappa_G,
                                            double kappa_H, double rho_h);

// Alternates gn_x_update and slack_update until the objective stagnates
// (|dPhi| <= stagnation_tol) or max_sweeps is hit. The returned iterate always
// follows a completed slack update, so Y.*Z = 0 holds exactly.
BcdResult bcd_solve(const MpccProblem& p, VerticalState& w, const MultiplierState& m,
                    const BcdConfig& cfg, Workspace& ws, GnWorkspace& gws,
                    const std::function<void(const VerticalState&, const SweepRecord&)>&
                        on_sweep = nullptr);

}  // namespace cito
