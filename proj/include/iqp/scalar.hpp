#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace iqp::scalar {

/// One-dimensional family on C = [-1, 1]: operator F(x) = alpha*x + beta,
/// objective f(x) = (1/2)alpha*x^2 + beta*x.
struct ScalarProblem {
  double alpha = 0.0;
  double beta = 0.0;
};

enum class SpmClass {
  strongly_monotone,
  strongly_pseudomonotone,
  not_pseudomonotone,
  identically_zero,
};

/// Classification of F on [-1,1]. gamma is set for the two strong classes;
/// witness carries an explicit violating pair (x, y) for the negative class.
/// in_cone records alpha + beta > 0 or alpha - beta > 0; the class is
/// strongly (pseudo)monotone exactly when in_cone holds.
struct SpmVerdict {
  SpmClass cls = SpmClass::identically_zero;
  std::optional<double> gamma;
  std::optional<std::pair<double, double>> witness;
  bool in_cone = false;
};

/// Exact six-case decision for strong pseudomonotonicity of F(x)=alpha*x+beta
/// on [-1,1]:
///   (0,0) -> identically_zero;
///   alpha=0, beta!=0 -> strongly_pseudomonotone, gamma = |beta|/2;
///   alpha>0 -> strongly_monotone, gamma = alpha;
///   alpha<0, beta=0 -> not_pseudomonotone, witness (-1, 1);
///   alpha<0, beta>0 -> strongly_pseudomonotone with gamma=(alpha+beta)/2 when
///       alpha+beta>0, else not_pseudomonotone (witness (1,-1) when
///       alpha+beta=0, else (-beta/alpha, 1));
///   alpha<0, beta<0 -> strongly_pseudomonotone with gamma=(alpha-beta)/2 when
///       alpha>beta, else not_pseudomonotone, witness (-beta/alpha, 1).
SpmVerdict classify_spm(const ScalarProblem& sp);

/// Brute-force search on the uniform grid_n x grid_n grid over [lo,hi]^2 for
/// a pair defeating strong pseudomonotonicity: <F(x), y-x> >= 0 while
/// <F(y), y-x> <= 0 with y != x (such a pair rules out every gamma > 0).
/// Returns the first pair found in scan order, or nullopt.
std::optional<std::pair<double, double>> falsify_spm(double alpha, double beta, int grid_n,
                                                     double lo = -1.0, double hi = 1.0);

/// Sampled modulus: min over grid pairs satisfying the premise (with
/// |y - x| >= 1e-9) of <F(y), y-x> / (y-x)^2, clipped below at 0.
/// +infinity when no premise pair exists.
double estimate_gamma(double alpha, double beta, int grid_n, double lo = -1.0, double hi = 1.0);

/// Boolean grid of (alpha+beta>0) or (alpha-beta>0) over the given ranges.
struct ConeMap {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<std::uint8_t> in_cone;  // row-major, alphas outer
  bool at(int i, int j) const {
    return in_cone[static_cast<size_t>(i) * betas.size() + static_cast<size_t>(j)] != 0;
  }
};
ConeMap cone_membership_map(double alpha_lo, double alpha_hi, double beta_lo, double beta_hi,
                            int resolution);

/// Solutions of (alpha*x + beta)(y - x) >= 0 for all y in [-1,1]:
/// -1 iff beta >= alpha, +1 iff alpha + beta <= 0, -beta/alpha iff alpha != 0
/// and it lies in [-1,1]; the whole interval iff alpha = beta = 0.
struct ScalarKktSet {
  std::vector<double> points;
  bool whole_interval = false;
  bool contains(double x, double tol = 1e-12) const;
};
ScalarKktSet scalar_kkt_set(const ScalarProblem& sp);

enum class Region { L, M, R };
char region_letter(Region r);

/// Region of the piecewise field at state x, via the (rho-alpha)-scaled
/// comparisons (valid for every sign of rho - alpha): L when
/// (rho-alpha)x < beta-rho, R when (rho-alpha)x > beta+rho, M otherwise.
/// Boundary states belong to M.
Region classify_region(const ScalarProblem& sp, double rho, double x);

/// One closed-form piece of the exact trajectory, valid on
/// [t_start, t_end) with t_end = +infinity for the final piece:
///   exponential: x(t) = coeff * exp(rate * (t - t_start)) + offset
///   linear:      x(t) = x_start + coeff * (t - t_start)
struct TrajectorySegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Region region = Region::M;
  double x_start = 0.0;
  bool is_linear = false;
  double coeff = 0.0;
  double rate = 0.0;
  double offset = 0.0;

  double eval(double t) const;
};

/// Piecewise-exact solution of
///   eta * xdot = P_C(x - (alpha x + beta)/rho) - x,   x(0) = x0,
/// built by concatenating the closed forms of the three field regions, with
/// boundary-crossing times solved analytically. limit is the exact t->inf
/// value.
struct ExactTrajectory {
  std::vector<TrajectorySegment> segments;
  double limit = 0.0;
  double eval(double t) const;
};

ExactTrajectory exact_trajectory(const ScalarProblem& sp, double rho, double eta, double x0);

/// True when the exact trajectory's limit lies in scalar_kkt_set(sp) within
/// 1e-12. Under alpha <= 0, or alpha > 0 with rho >= alpha, this always
/// holds; outside that range the verdict is still computed and *advisory is
/// set (no claim attaches to it).
bool trajectory_limit_is_kkt(const ScalarProblem& sp, double rho, double eta, double x0,
                             bool* advisory = nullptr);

}  // namespace iqp::scalar
