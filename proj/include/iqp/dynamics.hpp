#pragma once

#include <functional>

#include "iqp/dca.hpp"

namespace iqp {

enum class SystemKind {
  SystemA,  // xdot = (1/eta)[P_C(x - (1/rho)(Qx+q)) - x]
  SystemB,  // xdot = (1/eta)[F_C(x) - x]
};

/// Right-hand side of one of the two continuous-time schemes. SystemA accepts
/// general (possibly nonsymmetric) AVI data; SystemB needs a symmetric Q with
/// rho + lambda_min_lb > 0 so the proximal map F_C is well defined (the check
/// can be bypassed with allow_uncertified_rho, with no convergence claim).
class VectorField {
 public:
  VectorField(SystemKind kind, QuadraticProblem problem, double rho, double eta,
              bool allow_uncertified_rho = false);
  VectorField(SystemKind kind, AviProblem problem, double rho, double eta);

  Vec eval(const Vec& x) const;

  SystemKind kind() const { return kind_; }
  double rho() const { return rho_; }
  double eta() const { return eta_; }
  int dim() const;
  const ConstraintSet& constraint_set() const;
  const SpectralBounds& bounds() const { return bounds_; }
  bool is_avi() const { return std::holds_alternative<AviProblem>(problem_); }
  const QuadraticProblem& quadratic() const { return std::get<QuadraticProblem>(problem_); }
  const AviProblem& avi() const { return std::get<AviProblem>(problem_); }

  /// Certified global Lipschitz constant of the field:
  /// (1/eta)(||Q||_2ub/rho + 2) for SystemA, (1/eta)(l+1) for SystemB.
  double certified_lipschitz() const;

 private:
  friend struct FieldEvaluator;
  SystemKind kind_;
  std::variant<QuadraticProblem, AviProblem> problem_;
  double rho_;
  double eta_;
  SpectralBounds bounds_;   // of Q (SystemB certification + constants)
  double op_norm_ub_;       // spectral norm upper bound of Q or M
  bool uncertified_ = false;
};

/// Sampled trajectory. The state is never clamped back onto C; dists records
/// the observed distance to C at every stored sample and
/// invariance_violation the max over all integration steps.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> dists;
  double invariance_violation = 0.0;
  bool started_in_set = true;
  bool aborted_nonfinite = false;
};

struct IntegrateOptions {
  double h = 1e-3;
  double horizon = 50.0;
  long sample_stride = 1;  // store every k-th step (first and last always kept)
};

/// Classical fixed-step RK4 on [0, horizon]. Non-finite states abort the run,
/// returning the partial trajectory with aborted_nonfinite set.
Trajectory integrate(const VectorField& field, const Vec& x0, const IntegrateOptions& opts);

/// Same integrator, streaming states to the observer instead of storing them.
/// observer(t, x) is called at t=0 and after every accepted step; returning
/// false stops the integration early. Returns the max observed dist(x, C).
double integrate_observe(const VectorField& field, const Vec& x0, const IntegrateOptions& opts,
                         const std::function<bool(double, const Vec&)>& observer);

/// (observed, certified): observed is the max pairwise difference quotient
/// ||F(y)-F(x)||/||y-x|| over the given samples; certified is the closed-form
/// constant from certified_lipschitz(). observed <= certified must hold.
std::pair<double, double> check_field_lipschitz(const VectorField& field,
                                                const std::vector<Vec>& samples);

/// Checks ||F(x)|| <= M + L||x|| + 1e-9 at every sample, with
///   SystemA: M = (1/eta)(||xbar - q|| + (1/rho)||q||), L = (1/eta)((2/rho)||Q|| + 1)
///   SystemB: M = (1/eta)(l*||xbar|| + ||F_C(xbar)||),  L = (1+l)/eta
/// where xbar is the constraint set's reference point.
bool check_growth_bound(const VectorField& field, const std::vector<Vec>& samples,
                        double* worst_slack = nullptr);

/// Mean of the last `window` samples when they agree pairwise within tol;
/// nullopt when the tail has not settled.
std::optional<Vec> detect_limit(const Trajectory& traj, long window, double tol);

}  // namespace iqp
