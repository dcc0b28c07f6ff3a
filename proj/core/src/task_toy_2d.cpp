#include "cito/tasks.hpp"

namespace cito {

// Two-variable instance for method comparison: quadratic objective with the
// minimizer strictly inside the infeasible quadrant, complementarity directly
// on the variables (G = x1, H = x2).
MpccProblem build_toy_2d(double min_x, double min_y) {
  MpccProblem p;
  p.T = 1;
  p.n_x = 2;
  p.n_c = 1;
  p.n_e = 0;
  p.n_i = 0;
  p.r_rows = [](int) { return 2; };
  p.h_rows = [](int) { return 0; };
  const Eigen::Vector2d target(min_x, min_y);
  p.r = [target](int, CVecRef x, VecRef out) { out = x - target; };
  p.r_jac = [](int, CVecRef, MatRef J) { J = Mat::Identity(2, 2); };
  p.h = [](int, CVecRef, CVecRef, VecRef) {};
  p.h_jac = [](int, CVecRef, CVecRef, MatRef, MatRef) {};
  p.g = [](int, CVecRef, VecRef) {};
  p.g_jac = [](int, CVecRef, MatRef) {};
  p.G = [](int, CVecRef x, VecRef out) { out[0] = x[0]; };
  p.G_jac = [](int, CVecRef, MatRef J) {
    J.setZero();
    J(0, 0) = 1.0;
  };
  p.H = [](int, CVecRef x, VecRef out) { out[0] = x[1]; };
  p.H_jac = [](int, CVecRef, MatRef J) {
    J.setZero();
    J(0, 1) = 1.0;
  };
  return p;
}

MpccProblem build_toy_2d() { return build_toy_2d(1.0, 0.6); }

}  // namespace cito
