#include "cito/stationarity.hpp"

#include <cmath>

namespace cito {

std::vector<PairClass> classify_pairs(CVecRef Y, CVecRef Z, double tol_cls) {
  if (Y.size() != Z.size()) throw DimensionError("classify_pairs: Y and Z differ in length");
  std::vector<PairClass> cls(Y.size());
  for (int i = 0; i < Y.size(); ++i) {
    const double y = Y[i], z = Z[i];
    if (y < -tol_cls || z < -tol_cls) {
      cls[i] = PairClass::kInfeasible;
      continue;
    }
    const bool y0 = y <= tol_cls;
    const bool z0 = z <= tol_cls;
    if (y0 && z0) {
      cls[i] = PairClass::kBiactive;
    } else if (!y0 && z0) {
      cls[i] = PairClass::kPlusZero;
    } else if (y0 && !z0) {
      cls[i] = PairClass::kZeroPlus;
    } else {
      cls[i] = PairClass::kInfeasible;  // both strictly positive
    }
  }
  return cls;
}

namespace {

double biactive_mismatch(double a, double b) {
  // l_inf distance from (a, b) to the closed positive quadrant or either axis.
  const double to_quadrant = std::max(std::max(-a, 0.0), std::max(-b, 0.0));
  return std::min(to_quadrant, std::min(std::abs(a), std::abs(b)));
}

}  // namespace

double pair_mismatch(double a, double b, PairClass cls) {
  switch (cls) {
    case PairClass::kPlusZero: return std::abs(a);
    case PairClass::kZeroPlus: return std::abs(b);
    case PairClass::kBiactive: return biactive_mismatch(a, b);
    case PairClass::kInfeasible: break;
  }
  throw std::invalid_argument("pair_mismatch: infeasible pair class rejected");
}

double primal_residual(CVecRef Y, CVecRef Z) {
  if (Y.size() != Z.size()) throw DimensionError("primal_residual: Y and Z differ in length");
  if (Y.size() == 0) return 0.0;
  const double neg_y = Y.cwiseMin(0.0).cwiseAbs().maxCoeff();
  const double neg_z = Z.cwiseMin(0.0).cwiseAbs().maxCoeff();
  const double prod = (Y.array() * Z.array()).abs().maxCoeff();
  return std::max(prod, std::max(neg_y, neg_z));
}

KktResidualReport kkt_residual(const MpccProblem& p, const VerticalState& w,
                               const MultiplierState& m, double tol_cls) {
  Workspace ws(p);
  Evaluator ev(p, ws);
  KktResidualReport rep;

  Vec gx(w.X.size()), gy(w.Y.size()), gz(w.Z.size());
  ev.phi_gradient(w, m, gx, gy, gz);
  rep.x_block = gx.size() ? gx.cwiseAbs().maxCoeff() : 0.0;
  rep.pri = primal_residual(w.Y, w.Z);
  rep.classes = classify_pairs(w.Y, w.Z, tol_cls);

  const int n = static_cast<int>(w.Y.size());
  rep.d = Vec::Zero(n);
  rep.u = Vec::Zero(n);
  rep.v = Vec::Zero(n);
  rep.pair_mismatch = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = gy[i], b = gz[i];
    switch (rep.classes[i]) {
      case PairClass::kPlusZero:
        rep.d[i] = std::abs(a);
        rep.u[i] = 0.0;
        rep.v[i] = b;
        break;
      case PairClass::kZeroPlus:
        rep.d[i] = std::abs(b);
        rep.u[i] = a;
        rep.v[i] = 0.0;
        break;
      case PairClass::kBiactive: {
        const double to_quadrant = std::max(std::max(-a, 0.0), std::max(-b, 0.0));
        const double to_vaxis = std::abs(a);  // {0} x R
        const double to_uaxis = std::abs(b);  // R x {0}
        rep.d[i] = std::min(to_quadrant, std::min(to_vaxis, to_uaxis));
        if (to_quadrant <= to_vaxis && to_quadrant <= to_uaxis) {
          rep.u[i] = std::max(a, 0.0);
          rep.v[i] = std::max(b, 0.0);
        } else if (to_uaxis <= to_vaxis) {
          rep.u[i] = a;
          rep.v[i] = 0.0;
        } else {
          rep.u[i] = 0.0;
          rep.v[i] = b;
        }
        break;
      }
      case PairClass::kInfeasible:
        // Covered by the primal term; mismatch defined on feasible pairs only.
        rep.d[i] = 0.0;
        rep.u[i] = a;
        rep.v[i] = b;
        break;
    }
    rep.pair_mismatch = std::max(rep.pair_mismatch, rep.d[i]);
  }
  rep.r_in = std::max(rep.x_block, std::max(rep.pri, rep.pair_mismatch));
  return rep;
}

namespace {

// Min l_inf distance from (a, b) to grid points (us, vs) along a segment.
double grid_dist_u_axis(double a, double b, double lo, double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double u = lo + (hi - lo) * k / (n - 1);
    best = std::min(best, std::max(std::abs(a - u), std::abs(b)));
  }
  return best;
}

double grid_dist_v_axis(double a, double b, double lo, double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double v = lo + (hi - lo) * k / (n - 1);
    best = std::min(best, std::max(std::abs(a), std::abs(b - v)));
  }
  return best;
}

}  // namespace

Vec normal_cone_oracle(CVecRef a, CVecRef b, const std::vector<PairClass>& classes,
                       int grid_per_segment) {
  if (a.size() != b.size() || static_cast<size_t>(a.size()) != classes.size()) {
    throw DimensionError("normal_cone_oracle: mismatched inputs");
  }
  const double lim = 10.0;
  const int n = std::max(grid_per_segment, 100);
  Vec out(a.size());
  for (int i = 0; i < a.size(); ++i) {
    const double ai = a[i], bi = b[i];
    if (std::abs(ai) > lim || std::abs(bi) > lim) {
      throw OracleRangeError("normal_cone_oracle: input outside [-10, 10]");
    }
    double exact = 0.0;
    double grid = 0.0;
    switch (classes[i]) {
      case PairClass::kPlusZero:
        // admissible set {0} x R
        exact = std::abs(ai);
        grid = grid_dist_v_axis(ai, bi, -lim, lim, n);
        break;
      case PairClass::kZeroPlus:
        exact = std::abs(bi);
        grid = grid_dist_u_axis(ai, bi, -lim, lim, n);
        break;
      case PairClass::kBiactive: {
        exact = biactive_mismatch(ai, bi);
        // Q_M: both axes plus the closed positive quadrant. An l_inf
        // projection onto the quadrant from outside lands on its boundary,
        // so gridding the nonnegative half-axes covers it.
        grid = std::min(grid_dist_u_axis(ai, bi, -lim, lim, n),
                        grid_dist_v_axis(ai, bi, -lim, lim, n));
        if (ai >= 0.0 && bi >= 0.0) grid = 0.0;
        grid = std::min(grid, grid_dist_u_axis(ai, bi, 0.0, lim, n));
        grid = std::min(grid, grid_dist_v_axis(ai, bi, 0.0, lim, n));
        break;
      }
      case PairClass::kInfeasible:
        throw std::invalid_argument("normal_cone_oracle: infeasible pair class rejected");
    }
    const double grid_step = 2.0 * lim / (n - 1);
    if (std::abs(exact - grid) > grid_step + 1e-12) {
      throw std::logic_error("normal_cone_oracle: enumeration and grid disagree");
    }
    out[i] = exact;
  }
  return out;
}

}  // namespace cito
