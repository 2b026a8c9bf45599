#include "iqp/dca.hpp"

#include <chrono>
#include <cmath>

namespace iqp {

namespace {

constexpr long kSubproblemMaxIter = 2000000;

void require_finite(const Vec& x, const char* who) {
  if (!x.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

template <typename Problem>
double natural_residual_impl(const Problem& p, const Vec& x, double step, const Mat& op) {
  require_finite(x, "natural_residual");
  if (!(step > 0.0)) throw std::invalid_argument("natural_residual: step must be positive");
  Vec g = op * x + p.q;
  Vec proj;
  project_into(p.C, x - step * g, proj);
  return (x - proj).norm();
}

}  // namespace

double natural_residual(const QuadraticProblem& p, const Vec& x, double step) {
  return natural_residual_impl(p, x, step, p.Q);
}

double natural_residual(const AviProblem& p, const Vec& x, double step) {
  return natural_residual_impl(p, x, step, p.M);
}

KktResidual kkt_residual(const QuadraticProblem& p, const Vec& x) {
  return KktResidual{natural_residual(p, x, 1.0)};
}

KktResidual kkt_residual(const AviProblem& p, const Vec& x) {
  return KktResidual{natural_residual(p, x, 1.0)};
}

Vec scheme_a_step(const QuadraticProblem& p, double rho, const Vec& x) {
  require_finite(x, "scheme_a_step");
  if (!(rho > 0.0)) throw std::invalid_argument("scheme_a_step: rho must be positive");
  Vec out;
  project_into(p.C, x - (1.0 / rho) * (p.Q * x + p.q), out);
  return out;
}

Vec scheme_a_step(const AviProblem& p, double rho, const Vec& x) {
  require_finite(x, "scheme_a_step");
  if (!(rho > 0.0)) throw std::invalid_argument("scheme_a_step: rho must be positive");
  Vec out;
  project_into(p.C, x - (1.0 / rho) * (p.M * x + p.q), out);
  return out;
}

double fc_lipschitz_constant(const SpectralBounds& bounds, double rho) {
  double modulus = rho + bounds.lambda_min_lb;
  if (!(modulus > 0.0))
    throw std::invalid_argument("fc_lipschitz_constant: rho + lambda_min_lb must be positive");
  return (std::max(bounds.lambda_max_ub, 0.0) + rho) / modulus;
}

Vec solve_subproblem_fc(const QuadraticProblem& p, double rho, const Vec& u, double tol,
                        const SpectralBounds* bounds, bool allow_uncertified,
                        const Vec* warm_start) {
  require_finite(u, "solve_subproblem_fc");
  if (!(rho > 0.0)) throw std::invalid_argument("solve_subproblem_fc: rho must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_subproblem_fc: tol must be positive");
  SpectralBounds local;
  if (!bounds) {
    local = gershgorin_bounds(p.Q);
    bounds = &local;
  }
  if (!allow_uncertified && !(rho + bounds->lambda_min_lb > 0.0))
    throw std::invalid_argument(
        "solve_subproblem_fc: rho + lambda_min_lb must be positive (strong convexity "
        "not certified)");

  // Gradient of the subproblem objective is (Q + rho I)x + q - rho u, with
  // curvature at most lambda_max_ub + rho; the fixed step below makes the
  // projected-gradient map a contraction whenever rho is certified.
  double curvature = bounds->lambda_max_ub + rho;
  double step = 1.0 / std::max(curvature, 1e-12);

  Vec x;
  if (warm_start && warm_start->size() == u.size() && warm_start->allFinite()) {
    project_into(p.C, *warm_start, x);
  } else {
    project_into(p.C, u, x);
  }
  Vec grad(x.size()), next(x.size());
  Vec sample = p.C.reference_point();

  double stop = tol;
  long iters = 0;
  for (;;) {
    double displacement = std::numeric_limits<double>::infinity();
    while (displacement > stop) {
      if (++iters > kSubproblemMaxIter)
        throw std::runtime_error("solve_subproblem_fc: max_iter exceeded");
      grad.noalias() = p.Q * x;
      grad += p.q + rho * (x - u);
      project_into(p.C, x - step * grad, next);
      displacement = (next - x).norm();
      x.swap(next);
    }
    // Certificate: <grad psi(x), y - x> >= -10 tol at sampled y in C.
    grad.noalias() = p.Q * x;
    grad += p.q + rho * (x - u);
    double worst = grad.dot(sample - x);
    Vec pu;
    project_into(p.C, u, pu);
    worst = std::min(worst, grad.dot(pu - x));
    if (worst >= -10.0 * tol) break;
    stop *= 0.25;  // certificate not yet met; keep iterating tighter
  }
  return x;
}

DcaRun run_dca(const QuadraticProblem& p, DcaScheme scheme, const SolverConfig& config,
               const Vec& x0) {
  config.validate();
  require_finite(x0, "run_dca");
  if (!p.C.contains(x0)) throw std::invalid_argument("run_dca: x0 must lie in C");

  SpectralBounds bounds = gershgorin_bounds(p.Q);
  if (!config.unsafe_rho) {
    if (scheme == DcaScheme::A && !(config.rho > bounds.lambda_max_ub))
      throw std::invalid_argument("run_dca: scheme A requires rho > lambda_max_ub");
    if (scheme == DcaScheme::B && !(config.rho + bounds.lambda_min_lb > 0.0))
      throw std::invalid_argument("run_dca: scheme B requires rho + lambda_min_lb > 0");
  }

  auto t0 = std::chrono::steady_clock::now();
  DcaRun run;
  run.scheme = scheme;
  run.config = config;

  const double guard = 1e6 * (1.0 + x0.norm());
  const double inner_tol = 1e-12;

  Vec x = x0;
  run.trace.iterates.push_back(x);
  run.trace.residuals.push_back(natural_residual(p, x, 1.0));
  run.trace.termination = Termination::max_iter;

  for (long k = 0; k < config.max_iter; ++k) {
    if (run.trace.residuals.back() <= config.residual_tol) {
      run.trace.termination = Termination::residual_tol;
      break;
    }
    Vec next = scheme == DcaScheme::A
                   ? scheme_a_step(p, config.rho, x)
                   : solve_subproblem_fc(p, config.rho, x, inner_tol, &bounds,
                                         config.unsafe_rho);
    x = std::move(next);
    run.trace.iterates.push_back(x);
    run.trace.residuals.push_back(natural_residual(p, x, 1.0));
    if (x.norm() > guard) {
      run.trace.termination = Termination::divergence_guard;
      break;
    }
  }
  if (run.trace.termination == Termination::max_iter &&
      run.trace.residuals.back() <= config.residual_tol)
    run.trace.termination = Termination::residual_tol;

  run.final_point = run.trace.iterates.back();
  run.rate_estimate = estimate_r_linear_rate(run.trace, run.final_point);
  run.trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

std::optional<double> estimate_r_linear_rate(const SolveTrace& trace, const Vec& xbar) {
  const long K = static_cast<long>(trace.iterates.size());
  if (K < 2) return std::nullopt;
  const long tail_len = (K + 1) / 2;
  const long first = K - tail_len;
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();

  double best = 0.0;
  long usable = 0;
  for (long k = std::max(first, 1L); k < K; ++k) {
    double d = (trace.iterates[static_cast<size_t>(k)] - xbar).norm();
    if (d < floor) continue;
    ++usable;
    best = std::max(best, std::pow(d, 1.0 / static_cast<double>(k)));
  }
  if (usable < 10) return std::nullopt;
  return best;
}

}  // namespace iqp
