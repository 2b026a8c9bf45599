#pragma once

#include "iqp/projection.hpp"
#include "iqp/spectral.hpp"
#include "iqp/types.hpp"

namespace iqp {

/// Natural residual ||x - P_C(x - step*(Qx+q))||; zero exactly at KKT points
/// for any positive step.
double natural_residual(const QuadraticProblem& p, const Vec& x, double step);
double natural_residual(const AviProblem& p, const Vec& x, double step);

/// KKT certificate with unit step, independent of any solver configuration.
struct KktResidual {
  double value = 0.0;
};
KktResidual kkt_residual(const QuadraticProblem& p, const Vec& x);
KktResidual kkt_residual(const AviProblem& p, const Vec& x);

/// One explicit iteration: P_C(x - (1/rho)(Qx + q)).
Vec scheme_a_step(const QuadraticProblem& p, double rho, const Vec& x);
Vec scheme_a_step(const AviProblem& p, double rho, const Vec& x);

/// Tested Lipschitz constant for the proximal map u -> F_C(u):
/// (max(lambda_max_ub, 0) + rho) / (rho + lambda_min_lb).
/// Requires rho + lambda_min_lb > 0.
double fc_lipschitz_constant(const SpectralBounds& bounds, double rho);

/// F_C(u) = argmin_{x in C} (1/2)x'Qx + q'x + (rho/2)||x-u||^2, solved by
/// projected gradient with the fixed certified step 1/(lambda_max_ub + rho),
/// iterated until the step displacement drops below tol. The result is
/// certified through the subproblem variational inequality at sampled points
/// of C; if the certificate fails the tolerance is tightened and iteration
/// resumes. Requires rho + lambda_min_lb > 0 unless allow_uncertified.
/// warm_start, when given, seeds the iteration (useful for nearby repeated
/// solves; the certified answer does not depend on it beyond tol).
Vec solve_subproblem_fc(const QuadraticProblem& p, double rho, const Vec& u, double tol,
                        const SpectralBounds* bounds = nullptr,
                        bool allow_uncertified = false,
                        const Vec* warm_start = nullptr);

/// Iterate/limit data for one DCA run.
struct DcaRun {
  DcaScheme scheme = DcaScheme::A;
  SolverConfig config;
  SolveTrace trace;
  Vec final_point;
  std::optional<double> rate_estimate;
};

/// Runs scheme A (explicit projection step) or scheme B (proximal subproblem)
/// from x0 in C until the KKT residual reaches config.residual_tol or
/// config.max_iter is hit. rho certification: scheme A requires
/// rho > lambda_max_ub, scheme B requires rho + lambda_min_lb > 0
/// (skipped when config.unsafe_rho is set). A divergence guard trips when
/// ||x_k|| exceeds 1e6*(1+||x0||).
DcaRun run_dca(const QuadraticProblem& p, DcaScheme scheme, const SolverConfig& config,
               const Vec& x0);

/// Finite-sample proxy for limsup ||x_k - xbar||^(1/k): the max of that
/// quantity over the last ceil(K/2) iterates, skipping iterates closer to
/// xbar than 100 machine epsilons. Returns nullopt when fewer than 10 tail
/// iterates are usable.
std::optional<double> estimate_r_linear_rate(const SolveTrace& trace, const Vec& xbar);

}  // namespace iqp
