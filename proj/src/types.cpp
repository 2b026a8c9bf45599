#include "iqp/types.hpp"

#include <cmath>

namespace iqp {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace

ConstraintSet ConstraintSet::box(Vec lo, Vec hi) {
  require(lo.size() == hi.size(), "box: lo/hi size mismatch");
  require(lo.size() > 0, "box: empty dimension");
  require(all_finite(lo) && all_finite(hi), "box: non-finite bound");
  require((lo.array() <= hi.array()).all(), "box: lo > hi in some coordinate");
  int n = static_cast<int>(lo.size());
  return ConstraintSet(Box{std::move(lo), std::move(hi)}, n);
}

ConstraintSet ConstraintSet::ball(Vec center, double radius) {
  require(center.size() > 0, "ball: empty dimension");
  require(all_finite(center) && std::isfinite(radius), "ball: non-finite data");
  require(radius > 0.0, "ball: radius must be positive");
  int n = static_cast<int>(center.size());
  return ConstraintSet(Ball{std::move(center), radius}, n);
}

ConstraintSet ConstraintSet::polyhedron(Mat A, Vec b, Vec feasible_point) {
  require(A.rows() == b.size(), "polyhedron: A/b row mismatch");
  require(A.cols() == feasible_point.size(), "polyhedron: feasible point dimension mismatch");
  require(A.cols() > 0 && A.rows() > 0, "polyhedron: empty data");
  require(A.allFinite() && all_finite(b) && all_finite(feasible_point),
          "polyhedron: non-finite data");
  Vec slack = b - A * feasible_point;
  require((slack.array() >= -kMembershipTol).all(),
          "polyhedron: stored feasible point violates A x <= b");
  int n = static_cast<int>(A.cols());
  return ConstraintSet(Polyhedron{std::move(A), std::move(b), std::move(feasible_point)}, n);
}

ConstraintSet ConstraintSet::unit_interval() {
  return ConstraintSet(UnitInterval{}, 1);
}

bool ConstraintSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  if (!x.allFinite()) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return ((x - s.lo).array() >= -tol).all() && ((s.hi - x).array() >= -tol).all();
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - s.center).norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          return ((s.b - s.A * x).array() >= -tol).all();
        } else {
          return x[0] >= -1.0 - tol && x[0] <= 1.0 + tol;
        }
      },
      shape_);
}

Vec ConstraintSet::reference_point() const {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return 0.5 * (s.lo + s.hi);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return s.center;
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          return s.feasible_point;
        } else {
          return Vec::Zero(1);
        }
      },
      shape_);
}

QuadraticProblem::QuadraticProblem(Mat Q_, Vec q_, ConstraintSet C_)
    : Q(std::move(Q_)), q(std::move(q_)), C(std::move(C_)) {
  require(Q.rows() == Q.cols(), "problem: Q must be square");
  require(Q.rows() == q.size(), "problem: Q/q dimension mismatch");
  require(C.dim() == q.size(), "problem: constraint set dimension mismatch");
  require(Q.allFinite() && q.allFinite(), "problem: non-finite data");
  double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  require(asym <= kSymmetryTol, "problem: Q is not symmetric (max|Q-Q'| = " +
                                    std::to_string(asym) + ")");
}

AviProblem::AviProblem(Mat M_, Vec q_, ConstraintSet C_)
    : M(std::move(M_)), q(std::move(q_)), C(std::move(C_)) {
  require(M.rows() == M.cols(), "avi: M must be square");
  require(M.rows() == q.size(), "avi: M/q dimension mismatch");
  require(C.dim() == q.size(), "avi: constraint set dimension mismatch");
  require(M.allFinite() && q.allFinite(), "avi: non-finite data");
}

double objective_value(const QuadraticProblem& p, const Vec& x) {
  if (x.size() != p.dim()) throw std::invalid_argument("objective_value: dimension mismatch");
  return 0.5 * x.dot(p.Q * x) + p.q.dot(x);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::residual_tol: return "residual_tol";
    case Termination::max_iter: return "max_iter";
    case Termination::max_time: return "max_time";
    case Termination::divergence_guard: return "divergence_guard";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("config: rho must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("config: eta must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("config: h must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("config: residual_tol must be positive");
  if (max_iter <= 0) throw std::invalid_argument("config: max_iter must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be positive");
}

}  // namespace iqp
