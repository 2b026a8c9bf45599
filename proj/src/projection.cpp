#include "iqp/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iqp {

namespace {

constexpr double kActiveTol = 1e-10;   // facet counts as tight below this slack
constexpr double kMultTol = 1e-10;     // multiplier negativity tolerance

void clamp_box(const Box& s, const Vec& u, Vec& out) {
  out = u.cwiseMax(s.lo).cwiseMin(s.hi);
}

void project_ball(const Ball& s, const Vec& u, Vec& out) {
  Vec d = u - s.center;
  double nd = d.norm();
  if (nd > s.radius) {
    out = s.center + (s.radius / nd) * d;
  } else {
    out = u;  // includes the boundary case ||u - a|| == r
  }
}

// Primal active-set solver for min ||x - u||^2 s.t. A x <= b, started from
// the stored feasible point. The working set W is kept linearly independent;
// its Gram matrix A_W A_W' is refactored per change (fine at desk scale).
// Ties in both the blocking choice and the multiplier drop are broken by the
// lowest facet index, which rules out cycling.
struct ActiveSetWorkspace {
  std::vector<int> work;       // working set, sorted by insertion
  Eigen::MatrixXd gram;        // |W| x |W|
  Eigen::VectorXd rhs, mult;
  Vec x, dir, slack, adir;

  void reset(int m, int n) {
    work.clear();
    x.resize(n);
    dir.resize(n);
    slack.resize(m);
    adir.resize(m);
  }
};

ActiveSetWorkspace& scratch() {
  thread_local ActiveSetWorkspace ws;
  return ws;
}

// Solves the equality-constrained projection onto {x : a_i'x = b_i, i in W}:
//   x = u - A_W' mult,  (A_W A_W') mult = A_W u - b_W.
// Returns false if the Gram factorization fails (dependent rows).
bool solve_working_set(const Polyhedron& s, const Vec& u, ActiveSetWorkspace& ws) {
  const int k = static_cast<int>(ws.work.size());
  if (k == 0) {
    ws.x = u;
    ws.mult.resize(0);
    return true;
  }
  ws.gram.resize(k, k);
  ws.rhs.resize(k);
  for (int i = 0; i < k; ++i) {
    const auto ri = s.A.row(ws.work[i]);
    ws.rhs[i] = ri.dot(u) - s.b[ws.work[i]];
    for (int j = 0; j <= i; ++j) {
      double g = ri.dot(s.A.row(ws.work[j]));
      ws.gram(i, j) = g;
      ws.gram(j, i) = g;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(ws.gram);
  if (llt.info() != Eigen::Success) return false;
  ws.mult = llt.solve(ws.rhs);
  ws.x = u;
  for (int i = 0; i < k; ++i) ws.x -= ws.mult[i] * s.A.row(ws.work[i]).transpose();
  return true;
}

void project_polyhedron(const Polyhedron& s, const Vec& u, ActiveSetWorkspace& ws,
                        std::vector<int>* active_out, double* residual_out) {
  const int m = static_cast<int>(s.A.rows());
  const int n = static_cast<int>(s.A.cols());
  ws.reset(m, n);

  Vec cur = s.feasible_point;
  ws.slack = s.b - s.A * cur;
  for (int i = 0; i < m; ++i) {
    if (ws.slack[i] <= kActiveTol) {
      ws.work.push_back(i);
      if (!solve_working_set(s, u, ws)) {
        ws.work.pop_back();  // dependent facet at the start point; skip it
        solve_working_set(s, u, ws);
      }
    }
  }

  const long guard = 50L * (m + 2);
  for (long iter = 0;; ++iter) {
    if (iter > guard) throw std::runtime_error("project: active-set cycle guard exceeded");

    if (!solve_working_set(s, u, ws)) {
      // Dependent working set can only arise from a degenerate add; drop the
      // most recent facet and continue.
      ws.work.pop_back();
      continue;
    }
    ws.dir = ws.x - cur;
    double step_len = ws.dir.norm();

    if (step_len <= 1e-13 * (1.0 + cur.norm())) {
      // Stationary over the working set: check multiplier signs.
      int drop = -1;
      for (int i = 0; i < static_cast<int>(ws.work.size()); ++i) {
        if (ws.mult[i] < -kMultTol) {
          if (drop == -1 || ws.work[i] < ws.work[drop]) drop = i;
        }
      }
      if (drop == -1) break;  // optimal
      ws.work.erase(ws.work.begin() + drop);
      continue;
    }

    // Longest feasible step toward the working-set minimizer; ties between
    // blocking facets go to the lowest index.
    ws.adir = s.A * ws.dir;
    double t = 1.0;
    int blocking = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(ws.work.begin(), ws.work.end(), i) != ws.work.end()) continue;
      if (ws.adir[i] > 1e-14) {
        double ti = std::max(0.0, (s.b[i] - s.A.row(i).dot(cur)) / ws.adir[i]);
        // ascending scan + strict improvement keeps the lowest index on ties
        if (ti < t) {
          t = ti;
          blocking = i;
        }
      }
    }
    if (blocking >= 0 && t < 1.0) {
      cur += t * ws.dir;
      ws.work.push_back(blocking);
    } else {
      cur = ws.x;  // full step, working-set minimizer is feasible
    }
  }

  cur = ws.x;
  if (active_out) *active_out = ws.work;
  if (residual_out) {
    // Certification: primal feasibility, multiplier signs, and the sampled
    // variational inequality <u - x, y - x> <= 0 at the stored feasible point
    // and along each single-facet relaxation direction (the latter is exactly
    // the multiplier sign, so it is covered by min(mult)).
    double viol = (s.A * cur - s.b).maxCoeff();
    double neg_mult = 0.0;
    for (int i = 0; i < static_cast<int>(ws.work.size()); ++i)
      neg_mult = std::max(neg_mult, -ws.mult[i]);
    Vec y = s.feasible_point;
    double vi = (u - cur).dot(y - cur) / std::max(1.0, (y - cur).norm());
    *residual_out = std::max({0.0, viol, neg_mult, vi});
  }
  ws.x = cur;
}

}  // namespace

void project_into(const ConstraintSet& C, const Vec& u, Vec& out) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          clamp_box(s, u, out);
        } else if constexpr (std::is_same_v<T, Ball>) {
          project_ball(s, u, out);
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          auto& ws = scratch();
          project_polyhedron(s, u, ws, nullptr, nullptr);
          out = ws.x;
        } else {
          out.resize(1);
          out[0] = u[0] < -1.0 ? -1.0 : (u[0] > 1.0 ? 1.0 : u[0]);
        }
      },
      C.shape());
}

ProjectionResult project(const ConstraintSet& C, const Vec& u) {
  if (u.size() != C.dim()) throw std::invalid_argument("project: dimension mismatch");
  if (!u.allFinite()) throw std::invalid_argument("project: non-finite input");
  ProjectionResult r;
  if (C.is_polyhedron()) {
    auto& ws = scratch();
    project_polyhedron(std::get<Polyhedron>(C.shape()), u, ws, &r.active_set, &r.kkt_residual);
    r.point = ws.x;
  } else {
    project_into(C, u, r.point);
  }
  return r;
}

double dist_to_set(const ConstraintSet& C, const Vec& x) {
  thread_local Vec p;
  project_into(C, x, p);
  return (x - p).norm();
}

bool nonexpansiveness_check(const ConstraintSet& C, const Vec& u, const Vec& v) {
  Vec pu, pv;
  project_into(C, u, pu);
  project_into(C, v, pv);
  return (pu - pv).norm() <= (u - v).norm() + 1e-10;
}

}  // namespace iqp
