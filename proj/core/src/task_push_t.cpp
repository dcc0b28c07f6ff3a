#include "push_model.hpp"

#include <cmath>

namespace cito {

namespace {

using internal::PushCandidate;
using internal::PushModel;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigurationError("push_t: " + what);
}

// Face ids: 0 bar top, 1 bar left end, 2 bar right end, 3 bar bottom left,
// 4 bar bottom right, 5 stem left, 6 stem right, 7 stem bottom.
constexpr int kFaces = 8;

// Opposing-face pairs (inward normals pointing at each other): squeezing is
// excluded both as complementarity rows and as hard product equalities.
constexpr int kOpposing[7][2] = {{0, 3}, {0, 4}, {0, 7}, {1, 2}, {1, 6}, {5, 2}, {5, 6}};

}  // namespace

// T-shaped object: bar 4l x l on top of a stem l x 3l, origin at the
// centroid. Twelve contact candidates cover the eight faces (three across the
// top, two per stem side, one elsewhere), each with two friction-cone edge
// intensities. Mutual-exclusion complementarity keeps at most one face active.
MpccProblem build_push_t(const TaskSpec& spec, const GoalSpec& goal) {
  require(spec.id == "push_t", "wrong task id: " + spec.id);
  require(spec.n_q == 3 && spec.n_u == 24 && spec.n_c == 43 && spec.n_e == 7 && spec.n_i == 4,
          "dimensions do not match the task table");
  require(std::abs(spec.length_a - 0.05) < 1e-12 && std::abs(spec.friction - 0.4) < 1e-12 &&
              std::abs(spec.mass - 0.1) < 1e-12,
          "physical parameters do not match the task table");
  require(spec.horizon >= 1, "horizon must be positive");
  require(goal.start.size() == 3 && goal.goal.size() == 3, "goal must be (x, y, theta)");

  auto model = std::make_shared<PushModel>();
  model->spec = spec;
  model->q_start = goal.start;
  model->q_goal = goal.goal;

  const double l = spec.length_a;
  const double yc = 18.5 / 7.0 * l;  // centroid height above the stem foot
  const double y_top = 4.0 * l - yc;
  const double y_barbot = 3.0 * l - yc;
  const double y_barmid = 3.5 * l - yc;
  const double y_foot = -yc;

  std::vector<PushCandidate>& c = model->cands;
  c.push_back({{-1.2 * l, y_top}, {0.0, -1.0}, 0});
  c.push_back({{0.0, y_top}, {0.0, -1.0}, 0});
  c.push_back({{1.2 * l, y_top}, {0.0, -1.0}, 0});
  c.push_back({{-2.0 * l, y_barmid}, {1.0, 0.0}, 1});
  c.push_back({{2.0 * l, y_barmid}, {-1.0, 0.0}, 2});
  c.push_back({{-1.25 * l, y_barbot}, {0.0, 1.0}, 3});
  c.push_back({{1.25 * l, y_barbot}, {0.0, 1.0}, 4});
  c.push_back({{-0.5 * l, 0.75 * l - yc}, {1.0, 0.0}, 5});
  c.push_back({{-0.5 * l, 2.25 * l - yc}, {1.0, 0.0}, 5});
  c.push_back({{0.5 * l, 0.75 * l - yc}, {-1.0, 0.0}, 6});
  c.push_back({{0.5 * l, 2.25 * l - yc}, {-1.0, 0.0}, 6});
  c.push_back({{0.0, y_foot}, {0.0, 1.0}, 7});
  model->finalize();

  const int n_cand = 12, nu = 24;
  // Face activity S_f and rival activity R_f as row forms over u.
  Mat S = Mat::Zero(kFaces, nu);
  for (int i = 0; i < n_cand; ++i) {
    S(c[i].face, 2 * i) = 1.0;
    S(c[i].face, 2 * i + 1) = 1.0;
  }
  Mat R = Mat::Zero(kFaces, nu);
  for (int f = 0; f < kFaces; ++f) {
    for (int f2 = 0; f2 < kFaces; ++f2) {
      if (f2 != f) R.row(f) += S.row(f2);
    }
  }

  Mat A = Mat::Zero(43, nu), B = Mat::Zero(43, nu);
  int k = 0;
  for (int i = 0; i < n_cand; ++i) {  // facet vs rival faces
    for (int e = 0; e < 2; ++e, ++k) {
      A(k, 2 * i + e) = 1.0;
      B.row(k) = R.row(c[i].face);
    }
  }
  for (int f = 0; f < kFaces; ++f, ++k) {  // face vs rival faces
    A.row(k) = S.row(f);
    B.row(k) = R.row(f);
  }
  for (auto& op : kOpposing) {  // anti-squeeze
    A.row(k) = S.row(op[0]);
    B.row(k) = S.row(op[1]);
    ++k;
  }
  const int bottoms[3][2] = {{3, 4}, {3, 7}, {4, 7}};
  for (auto& bp : bottoms) {  // single bottom contact
    A.row(k) = S.row(bp[0]);
    B.row(k) = S.row(bp[1]);
    ++k;
  }
  A.row(k) = S.row(0);  // top against all bottoms
  B.row(k) = S.row(3) + S.row(4) + S.row(7);
  ++k;
  model->A = A;
  model->B = B;

  // Extra equalities: hard mutual-exclusion products for the opposing pairs.
  auto Sm = std::make_shared<Mat>(S);
  auto extra_eq = [Sm](const PushModel&, CVecRef u, VecRef out) {
    for (int j = 0; j < 7; ++j) {
      out[j] = (Sm->row(kOpposing[j][0]) * u).value() * (Sm->row(kOpposing[j][1]) * u).value();
    }
  };
  auto extra_eq_jac = [Sm](const PushModel&, CVecRef u, MatRef J) {
    for (int j = 0; j < 7; ++j) {
      const double sa = (Sm->row(kOpposing[j][0]) * u).value();
      const double sb = (Sm->row(kOpposing[j][1]) * u).value();
      J.row(j) = sb * Sm->row(kOpposing[j][0]) + sa * Sm->row(kOpposing[j][1]);
    }
  };

  // Boundary constraints: the pose stays inside the workspace box.
  const double bound = spec.workspace_bound;
  auto ineq = [bound, nu](const PushModel&, CVecRef x, VecRef out) {
    out[0] = x[nu] - bound;
    out[1] = -x[nu] - bound;
    out[2] = x[nu + 1] - bound;
    out[3] = -x[nu + 1] - bound;
  };
  auto ineq_jac = [nu](const PushModel&, CVecRef, MatRef J) {
    J.setZero();
    J(0, nu) = 1.0;
    J(1, nu) = -1.0;
    J(2, nu + 1) = 1.0;
    J(3, nu + 1) = -1.0;
  };

  return internal::make_push_problem(std::move(model), extra_eq, extra_eq_jac, ineq, ineq_jac);
}

}  // namespace cito
