#pragma once

#include "iqp/types.hpp"

namespace iqp {

enum class DcaScheme { A, B };

/// Certified eigenvalue bracket for a symmetric matrix plus iterative
/// estimates. The bounds come from Gershgorin discs and are the only values
/// used for certification; the estimates merely refine them.
/// Invariant: lambda_min_lb <= lambda_min_est <= lambda_max_est <= lambda_max_ub.
struct SpectralBounds {
  double lambda_min_lb = 0.0;
  double lambda_max_ub = 0.0;
  double lambda_min_est = 0.0;
  double lambda_max_est = 0.0;
  bool estimates_converged = false;
};

/// Gershgorin disc bounds: ub = max_i (Q_ii + sum_{j!=i} |Q_ij|),
/// lb = min_i (Q_ii - sum_{j!=i} |Q_ij|). Estimates are set to the bounds.
SpectralBounds gershgorin_bounds(const Mat& Q);

/// Extremal eigenvalue estimates by power iteration on the shifted matrices
/// Q - lb*I (largest) and ub*I - Q (smallest). Starts from the normalized
/// all-ones vector; if that stalls (it can be exactly orthogonal to the
/// dominant eigenvector), a fixed sequence of deterministic fallback starts
/// is tried, so runs remain reproducible. On non-convergence the Gershgorin
/// values are returned and *converged is set to false.
std::pair<double, double> power_iteration_extremes(const Mat& Q, double tol,
                                                   long max_iter,
                                                   bool* converged = nullptr);

/// Gershgorin bounds refined by power iteration (estimates clamped into the
/// certified bracket).
SpectralBounds spectral_bounds(const Mat& Q, double tol = 1e-10, long max_iter = 20000);

/// Relative default margin for the regularization weight: 1e-3 * (1 + |bound|).
double default_rho_margin(double bound);

/// Scheme A: max(lambda_max_ub, 0) + margin;
/// scheme B: max(-lambda_min_lb, 0) + margin. Always positive.
double choose_rho(const SpectralBounds& bounds, DcaScheme scheme, double margin);
double choose_rho(const Mat& Q, DcaScheme scheme, double margin);
/// Same with the relative default margin.
double choose_rho(const Mat& Q, DcaScheme scheme);

/// Upper bound on the spectral norm of a symmetric matrix from its bounds.
inline double sym_two_norm_ub(const SpectralBounds& b) {
  return std::max(std::abs(b.lambda_min_lb), std::abs(b.lambda_max_ub));
}

}  // namespace iqp
