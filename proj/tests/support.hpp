#pragma once

// Shared helpers for the test suites: random 1D flow tuples under the
// convergence hypotheses, the exact-vs-RK4 comparison harness, and small
// sampling utilities.

#include <cmath>

#include "iqp/dynamics.hpp"
#include "iqp/rng.hpp"
#include "iqp/scalar.hpp"

namespace testsupport {

using iqp::Vec;

struct ScalarTuple {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 1.0;
  double eta = 1.0;
  double x0 = 0.0;
};

/// Time after which the exact trajectory stays within tol of its limit.
inline double settle_time(const iqp::scalar::ExactTrajectory& traj, double tol) {
  const auto& last = traj.segments.back();
  if (last.is_linear || last.coeff == 0.0) return last.t_start;
  double gap = std::abs(last.coeff);
  if (gap <= tol) return last.t_start;
  return last.t_start + std::log(gap / tol) / (-last.rate);
}

/// Random tuple satisfying alpha <= 0 or rho >= alpha, with rates bounded
/// away from zero so trajectories settle inside a practical horizon. Tuples
/// whose settling time exceeds the cap are redrawn (near-repeller starts).
inline ScalarTuple draw_tuple(iqp::Xoshiro256pp& rng, double settle_cap = 800.0) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    ScalarTuple t;
    std::uint64_t mode = rng.next();
    if (mode % 8 == 0) {
      t.alpha = 0.0;
    } else {
      double mag = rng.uniform(0.5, 3.0);
      t.alpha = (mode % 2 == 0) ? mag : -mag;
    }
    t.beta = (rng.next() % 8 == 0) ? 0.0 : rng.uniform(-3.0, 3.0);
    if (t.alpha > 0.0) {
      t.rho = (rng.next() % 16 == 0) ? t.alpha : t.alpha + rng.uniform(0.0, 2.0);
    } else {
      t.rho = rng.uniform(0.5, 3.0);
    }
    t.eta = rng.uniform(0.5, 2.0);
    t.x0 = rng.uniform(-1.0, 1.0);
    if (rng.next() % 16 == 0) {
      // start exactly on a region switch value when one lies inside [-1,1]
      double w = t.rho - t.alpha;
      if (w != 0.0) {
        double boundary = (rng.next() % 2 == 0 ? t.beta - t.rho : t.beta + t.rho) / w;
        if (boundary >= -1.0 && boundary <= 1.0) t.x0 = boundary;
      }
    }
    auto exact = iqp::scalar::exact_trajectory({t.alpha, t.beta}, t.rho, t.eta, t.x0);
    if (settle_time(exact, 1e-8) <= settle_cap) return t;
  }
  return ScalarTuple{};  // unreachable at these parameter ranges
}

struct FlowComparison {
  double max_pointwise_err = 0.0;  // |rk4 - exact| for t in [0, 10]
  double limit_err = 0.0;          // |rk4 end state - analytic limit|
  bool limit_in_kkt = false;       // analytic limit vs the exact KKT set
  bool advisory = false;
};

/// Integrates the 1D explicit flow with RK4 at the given step and compares
/// it against the closed-form engine: pointwise on [0, min(10, horizon)] and
/// at a horizon long enough for the exact solution to settle to 1e-8.
inline FlowComparison compare_exact_vs_rk4(const ScalarTuple& t, double h = 1e-4,
                                           long compare_stride = 1) {
  using namespace iqp;
  scalar::ScalarProblem sp{t.alpha, t.beta};
  scalar::ExactTrajectory exact = scalar::exact_trajectory(sp, t.rho, t.eta, t.x0);

  FlowComparison result;
  result.limit_in_kkt =
      scalar::trajectory_limit_is_kkt(sp, t.rho, t.eta, t.x0, &result.advisory);

  Mat Q(1, 1);
  Q << t.alpha;
  Vec q(1);
  q << t.beta;
  QuadraticProblem p(Q, q, ConstraintSet::unit_interval());
  VectorField field(SystemKind::SystemA, p, t.rho, t.eta);

  double horizon = std::max(10.0, settle_time(exact, 1e-8));
  IntegrateOptions opts;
  opts.h = h;
  opts.horizon = horizon;

  long step = 0;
  double final_state = t.x0;
  integrate_observe(field, Vec::Constant(1, t.x0), opts, [&](double time, const Vec& x) {
    final_state = x[0];
    if (time <= 10.0 + 1e-12 && step % compare_stride == 0) {
      double err = std::abs(x[0] - exact.eval(time));
      if (err > result.max_pointwise_err) result.max_pointwise_err = err;
    }
    ++step;
    return true;
  });
  result.limit_err = std::abs(final_state - exact.limit);
  return result;
}

}  // namespace testsupport
