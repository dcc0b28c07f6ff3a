#pragma once

#include "cito/problem.hpp"

namespace cito {

// Stacked Gauss-Newton system in X for fixed (Y, Z):
//   stack = [r_t; sqrt(rho_h)(hbar_t + kappa_t/rho_h); sqrt(rho_g)(g_t + mu_t/rho_g)_+ ]
// with 0.5*||stack||^2 = Phi. A shifted inequality row contributes iff
// g + mu/rho_g > 0 (strict); inactive rows stay in the stack with value zero
// so the sparsity pattern is fixed. The Jacobian is block-bidiagonal in t.
struct GnSystem {
  Vec stack;
  SpMat jac;  // d stack / d X
};

// The normal-equation data of the GN stack accumulated per time-step block;
// coupling exists only between consecutive steps (through h), so J^T J is
// block-tridiagonal. Used by the solver hot path; numerically identical to
// forming the sparse stack and multiplying.
struct GnBlockSystem {
  std::vector<Mat> diag;  // T blocks, n_x x n_x
  std::vector<Mat> off;   // T-1 coupling blocks (t, t+1)
  std::vector<Vec> grad;  // per-step J^T stack
  double phi = 0.0;       // 0.5 * ||stack||^2

  double grad_inf_norm() const;
};

// Scratch space for objective evaluations; reusable across calls on the same
// problem. Not safe for concurrent use by two evaluations.
class Workspace {
 public:
  explicit Workspace(const MpccProblem& p);

  const ProblemLayout& layout() const { return layout_; }

  // Accumulated wall time spent inside value/Jacobian callbacks while
  // assembling GN systems and gradients.
  double deriv_time_s = 0.0;

 private:
  friend class Evaluator;
  ProblemLayout layout_;
  Vec xbuf_, rbuf_, hbuf_, gbuf_, Gbuf_, Hbuf_;
  Mat Jr_, Jhx_, Jhn_, Jg_, JG_, JH_;
  Mat Jself_;
  Vec res_self_;
  std::vector<Eigen::Triplet<double>> trips_;
};

// Evaluation routines for the AuLa objective Phi over a fixed problem.
class Evaluator {
 public:
  Evaluator(const MpccProblem& p, Workspace& ws) : p_(p), ws_(ws) {}

  // Phi(w; m). Throws NumericalDomainError on non-finite callback output.
  double phi(const VerticalState& w, const MultiplierState& m) const;

  // Non-throwing variant for line-search probes: returns false (and +inf)
  // when a callback yields a non-finite value.
  bool try_phi(const VerticalState& w, const MultiplierState& m, double* value) const;

  // Exact gradient of Phi over (X, Y, Z). The Y block is
  // -rho_h (G - y + kappa_G/rho_h), the Z block analogous.
  void phi_gradient(const VerticalState& w, const MultiplierState& m, VecRef grad_x,
                    VecRef grad_y, VecRef grad_z) const;

  // Stacked residual and X-Jacobian with 0.5*||stack||^2 = Phi.
  void gn_system(const VerticalState& w, const MultiplierState& m, GnSystem* sys) const;

  // Same stack folded directly into block-tridiagonal normal equations.
  void gn_block_system(const VerticalState& w, const MultiplierState& m,
                       GnBlockSystem* sys) const;

  // Stacked hbar (equality rows of the vertical form, time-major).
  void eval_hbar(const VerticalState& w, VecRef hbar) const;

  // Stacked inequality values g (time-major); empty when n_i = 0.
  void eval_g(CVecRef X, VecRef gvals) const;

  const MpccProblem& problem() const { return p_; }

 private:
  double phi_impl(const VerticalState& w, const MultiplierState& m, bool throw_on_nan,
                  bool* ok) const;

  const MpccProblem& p_;
  Workspace& ws_;
};

// Central finite-difference gradient of Phi; test oracle, independent of the
// analytic gradient path.
Vec fd_phi_gradient(const MpccProblem& p, const VerticalState& w, const MultiplierState& m,
                    double step = 1e-6);

}  // namespace cito
