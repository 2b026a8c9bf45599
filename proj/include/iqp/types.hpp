#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace iqp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Entrywise tolerance for accepting a matrix as symmetric.
inline constexpr double kSymmetryTol = 1e-12;
/// Constraint violations up to this amount count as feasible.
inline constexpr double kMembershipTol = 1e-10;

/// Axis-aligned box {x : lo <= x <= hi}.
struct Box {
  Vec lo;
  Vec hi;
};

/// Closed Euclidean ball {x : ||x - center|| <= radius}.
struct Ball {
  Vec center;
  double radius = 1.0;
};

/// Polyhedron {x : A x <= b}. Nonemptiness is certified by a stored feasible
/// point supplied at construction; no phase-1 LP is ever run.
struct Polyhedron {
  Mat A;
  Vec b;
  Vec feasible_point;
};

/// The segment [-1, 1] in dimension 1. Kept as its own variant (not a box)
/// so the one-dimensional analysis code paths are unambiguous.
struct UnitInterval {};

/// Nonempty closed convex constraint set, one of four shapes.
/// Immutable after construction; all invariants checked by the factories.
class ConstraintSet {
 public:
  using Variant = std::variant<Box, Ball, Polyhedron, UnitInterval>;

  static ConstraintSet box(Vec lo, Vec hi);
  static ConstraintSet ball(Vec center, double radius);
  static ConstraintSet polyhedron(Mat A, Vec b, Vec feasible_point);
  static ConstraintSet unit_interval();

  int dim() const { return dim_; }
  const Variant& shape() const { return shape_; }

  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  bool is_ball() const { return std::holds_alternative<Ball>(shape_); }
  bool is_polyhedron() const { return std::holds_alternative<Polyhedron>(shape_); }
  bool is_unit_interval() const { return std::holds_alternative<UnitInterval>(shape_); }

  /// Membership test with an absolute slack on each defining inequality.
  bool contains(const Vec& x, double tol = kMembershipTol) const;

  /// A point guaranteed to lie in the set: box midpoint, ball center,
  /// the stored feasible point, or 0 for the unit interval.
  Vec reference_point() const;

 private:
  ConstraintSet(Variant shape, int dim) : shape_(std::move(shape)), dim_(dim) {}
  Variant shape_;
  int dim_;
};

/// min (1/2) x'Qx + q'x over C, with Q symmetric (possibly indefinite).
struct QuadraticProblem {
  Mat Q;
  Vec q;
  ConstraintSet C;

  /// Throws std::invalid_argument on dimension mismatch or if
  /// max|Q - Q'| exceeds the symmetry tolerance.
  QuadraticProblem(Mat Q_, Vec q_, ConstraintSet C_);

  int dim() const { return static_cast<int>(q.size()); }
};

/// Affine variational inequality data: find xbar in C with
/// <M xbar + q, y - xbar> >= 0 for all y in C. M need not be symmetric.
struct AviProblem {
  Mat M;
  Vec q;
  ConstraintSet C;

  AviProblem(Mat M_, Vec q_, ConstraintSet C_);

  int dim() const { return static_cast<int>(q.size()); }
};

/// (1/2) x'Qx + q'x.
double objective_value(const QuadraticProblem& p, const Vec& x);

enum class Termination {
  residual_tol,
  max_iter,
  max_time,
  divergence_guard,
};

std::string to_string(Termination t);

/// Iterate history of a solver run. residuals[k] is the KKT residual at
/// iterates[k]; the two sequences always have equal length.
struct SolveTrace {
  std::vector<Vec> iterates;
  std::vector<double> residuals;
  Termination termination = Termination::max_iter;
  double wall_time = 0.0;
};

/// Shared solver/integrator configuration. All numeric fields must be
/// strictly positive.
struct SolverConfig {
  double rho = 1.0;
  double eta = 1.0;
  double h = 1e-3;           // integrator step
  double residual_tol = 1e-8;
  long max_iter = 100000;
  double horizon = 50.0;     // integration end time T
  bool unsafe_rho = false;   // skip rho certification (no convergence claim)

  void validate() const;
};

}  // namespace iqp
