#pragma once

#include "cito/objective.hpp"
#include "cito/problem.hpp"

namespace cito {

// Complementarity branch of a slack pair. Entries within the classification
// tolerance of zero count as zero; pairs with both entries positive or any
// entry negative are flagged infeasible, never silently classified.
enum class PairClass {
  kPlusZero,   // y > 0, z = 0
  kZeroPlus,   // y = 0, z > 0
  kBiactive,   // y = 0, z = 0
  kInfeasible,
};

std::vector<PairClass> classify_pairs(CVecRef Y, CVecRef Z, double tol_cls = 1e-9);

// Per-pair stationarity mismatch d_i for gradient components (a, b) =
// (dPhi/dy_i, dPhi/dz_i):
//   |a|                                          on PlusZero
//   |b|                                          on ZeroPlus
//   min{ max((-a)_+, (-b)_+), |a|, |b| }         on Biactive
// Throws on infeasible classes.
double pair_mismatch(double a, double b, PairClass cls);

// max{ ||min(Y,0)||_inf, ||min(Z,0)||_inf, ||Y.*Z||_inf }.
double primal_residual(CVecRef Y, CVecRef Z);

struct KktResidualReport {
  double x_block = 0;        // ||grad_X Phi||_inf
  double pri = 0;            // primal complementarity residual
  double pair_mismatch = 0;  // max_i d_i over feasible pairs
  double r_in = 0;           // max of the three
  Vec d;                     // per-pair mismatch (0 for infeasible pairs)
  Vec u, v;                  // witness multipliers achieving the per-pair infimum
  std::vector<PairClass> classes;
};

// Closed-form KKT residual of the inner AuLa subproblem at w, with witness
// multipliers following the branch pattern (u=0 on PlusZero, v=0 on ZeroPlus,
// (u,v) in the biactive multiplier set).
KktResidualReport kkt_residual(const MpccProblem& p, const VerticalState& w,
                               const MultiplierState& m, double tol_cls = 1e-9);

// Reference mismatch via exact case enumeration cross-checked against a dense
// grid (>= grid_per_segment points per branch segment) over [-10, 10].
// Validation tool for small instances; inputs outside the range are rejected.
struct OracleRangeError : std::invalid_argument {
  explicit OracleRangeError(const std::string& what) : std::invalid_argument(what) {}
};

Vec normal_cone_oracle(CVecRef a, CVecRef b, const std::vector<PairClass>& classes,
                       int grid_per_segment = 10000);

}  // namespace cito
