#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cito {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using CVecRef = Eigen::Ref<const Eigen::VectorXd>;
using VecRef = Eigen::Ref<Eigen::VectorXd>;
using MatRef = Eigen::Ref<Eigen::MatrixXd>;

// Thrown when an input vector does not match the declared problem dimensions.
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a task builder is handed a spec that contradicts the task table.
struct ConfigurationError : std::invalid_argument {
  explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a callback produces a non-finite value; carries the offending
// time step and row.
struct NumericalDomainError : std::runtime_error {
  NumericalDomainError(const std::string& where, int t_, int row_)
      : std::runtime_error(where + ": non-finite value at t=" + std::to_string(t_) +
                           ", row=" + std::to_string(row_)),
        t(t_),
        row(row_) {}
  int t = -1;
  int row = -1;
};

// Thrown when the damped Gauss-Newton system stays singular after the
// regularization fallback.
struct SingularSystemError : std::runtime_error {
  explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

// A trajectory MPCC over steps t = 0..T-1.
//
// Per-step decision block x_t has dimension n_x. All stacked vectors are laid
// out time-major then row-major:
//   X          : T blocks of n_x
//   Y, Z       : T blocks of n_c (slack pairs)
//   kappa      : T blocks of [h_t rows; (G-y)_t rows; (H-z)_t rows]
//   mu         : T blocks of n_i
//
// The equality callback h covers dynamics plus extra per-step equalities. Its
// row count may vary with t (h_rows); at the terminal step it reduces to the
// terminal-only form and x_next is passed as an empty vector.
struct MpccProblem {
  int T = 0;    // time steps
  int n_x = 0;  // per-step decision dimension
  int n_c = 0;  // complementarity pairs per step
  int n_e = 0;  // extra equality rows per step (beyond dynamics)
  int n_i = 0;  // inequality rows per step

  std::function<int(int)> r_rows;  // residual rows at step t
  std::function<int(int)> h_rows;  // equality rows at step t

  // Value callbacks. All are pure: same input, same output.
  std::function<void(int, CVecRef, VecRef)> r;
  std::function<void(int, CVecRef, CVecRef, VecRef)> h;  // (t, x_t, x_{t+1}, out)
  std::function<void(int, CVecRef, VecRef)> g;
  std::function<void(int, CVecRef, VecRef)> G;
  std::function<void(int, CVecRef, VecRef)> H;

  // Analytic Jacobians, dense per-step blocks.
  std::function<void(int, CVecRef, MatRef)> r_jac;
  std::function<void(int, CVecRef, CVecRef, MatRef, MatRef)> h_jac;  // d/dx_t, d/dx_{t+1}
  std::function<void(int, CVecRef, MatRef)> g_jac;
  std::function<void(int, CVecRef, MatRef)> G_jac;
  std::function<void(int, CVecRef, MatRef)> H_jac;

  int x_dim() const { return T * n_x; }
  int pair_dim() const { return T * n_c; }
};

// Precomputed offsets for the stacked equality/residual vectors of a problem.
struct ProblemLayout {
  ProblemLayout() = default;
  explicit ProblemLayout(const MpccProblem& p);

  int T = 0, n_x = 0, n_c = 0, n_i = 0;
  int x_dim = 0;
  int pair_dim = 0;
  int eq_dim = 0;    // stacked h-bar rows: sum_t (h_rows(t) + 2*n_c)
  int ineq_dim = 0;  // T * n_i
  int res_dim = 0;   // sum_t r_rows(t)

  std::vector<int> h_rows;  // per-step h rows
  std::vector<int> r_off;   // offset of r_t in the stacked residual
  std::vector<int> r_rows;
  std::vector<int> eq_off;  // offset of step t's [h; G-y; H-z] block in kappa

  int kappa_g_off(int t) const { return eq_off[t] + h_rows[t]; }
  int kappa_h_off(int t) const { return eq_off[t] + h_rows[t] + n_c; }
};

// Decision state of the vertical form: trajectory block plus slack pairs.
struct VerticalState {
  Vec X;  // length T*n_x
  Vec Y;  // length T*n_c, nonnegative
  Vec Z;  // length T*n_c, nonnegative, Y.*Z = 0 after any completed slack update

  int dim() const { return static_cast<int>(X.size() + Y.size() + Z.size()); }
};

// Multipliers and penalties of the augmented-Lagrangian subproblem.
struct MultiplierState {
  Vec kappa;  // stacked equality multipliers, layout per ProblemLayout
  Vec mu;     // stacked inequality multipliers, nonnegative
  double rho_h = 1.0;  // equality penalty
  double rho_g = 1.0;  // inequality penalty
};

MultiplierState make_zero_multipliers(const MpccProblem& p, double rho_h, double rho_g);

// Max-norm constraint violations of the original problem, measured from X alone.
struct FeasibilityReport {
  double eq_inf = 0.0;    // max |h-bar| over all rows (slack rows use Y, Z)
  double ineq_inf = 0.0;  // max (g)_+
  double comp_inf = 0.0;  // max of |G.*H| and negative parts of G, H

  double max_violation() const { return std::max(eq_inf, std::max(ineq_inf, comp_inf)); }
};

// Lifts a trajectory into the vertical form. (Y,Z) is the projection of
// (G(x_t), H(x_t)) onto the complementarity cone union, pairwise; ties keep
// the G branch.
VerticalState assemble_vertical(const MpccProblem& p, CVecRef X);

// Constraint violations of the original problem at X (slacks ignored).
FeasibilityReport check_feasibility(const MpccProblem& p, CVecRef X);

// Violations of the vertical form at w: equality rows include G-y and H-z.
FeasibilityReport check_vertical_feasibility(const MpccProblem& p, const VerticalState& w);

// Compares every analytic Jacobian against central finite differences at the
// given trajectory; returns the worst relative mismatch. Used to validate
// hand-coded task derivatives.
double max_jacobian_mismatch(const MpccProblem& p, CVecRef X, double fd_step = 1e-6);

}  // namespace cito
