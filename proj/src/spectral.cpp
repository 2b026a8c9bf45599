#include "iqp/spectral.hpp"

#include <cmath>

namespace iqp {

namespace {

void require_symmetric(const Mat& Q) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument("spectral: matrix must be square");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol)
    throw std::invalid_argument("spectral: matrix must be symmetric");
}

// Deterministic start vectors, tried in order until power iteration locks on.
Vec fallback_start(int which, int n) {
  Vec v(n);
  switch (which) {
    case 0: v.setOnes(); break;
    case 1: v.setZero(); v[0] = 1.0; break;
    case 2:
      for (int i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
      break;
    default:
      for (int i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i);
      break;
  }
  return v / v.norm();
}

// Dominant eigenvalue of the PSD matrix B by plain power iteration.
// Convergence: residual ||Bv - theta v|| <= tol * max(1, theta).
bool dominant_eig(const Mat& B, double tol, long max_iter, double& theta_out) {
  const int n = static_cast<int>(B.rows());
  for (int start = 0; start < 4; ++start) {
    Vec v = fallback_start(start, n);
    double theta = 0.0;
    Vec w(n);
    bool stalled = false;
    for (long k = 0; k < max_iter; ++k) {
      w.noalias() = B * v;
      double nw = w.norm();
      if (nw <= 1e-300) {  // v sits in the kernel; try the next start
        stalled = true;
        break;
      }
      v = w / nw;
      theta = v.dot(B * v);
      double res = (B * v - theta * v).norm();
      if (res <= tol * std::max(1.0, std::abs(theta))) {
        theta_out = theta;
        return true;
      }
    }
    if (!stalled) {
      theta_out = theta;
      return false;  // ran out of iterations while making progress
    }
  }
  theta_out = 0.0;
  return false;
}

}  // namespace

SpectralBounds gershgorin_bounds(const Mat& Q) {
  require_symmetric(Q);
  const int n = static_cast<int>(Q.rows());
  double lb = std::numeric_limits<double>::infinity();
  double ub = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) radius += std::abs(Q(i, j));
    lb = std::min(lb, Q(i, i) - radius);
    ub = std::max(ub, Q(i, i) + radius);
  }
  SpectralBounds b;
  b.lambda_min_lb = lb;
  b.lambda_max_ub = ub;
  b.lambda_min_est = lb;
  b.lambda_max_est = ub;
  b.estimates_converged = false;
  return b;
}

std::pair<double, double> power_iteration_extremes(const Mat& Q, double tol,
                                                   long max_iter, bool* converged) {
  if (!(tol > 0.0)) throw std::invalid_argument("power iteration: tol must be positive");
  SpectralBounds g = gershgorin_bounds(Q);
  const int n = static_cast<int>(Q.rows());
  double span = g.lambda_max_ub - g.lambda_min_lb;
  if (span <= tol * std::max(1.0, std::abs(g.lambda_max_ub))) {
    // Gershgorin bracket already pins the whole spectrum (Q is a multiple of I).
    if (converged) *converged = true;
    return {g.lambda_min_lb, g.lambda_max_ub};
  }
  Mat shifted_up = Q - g.lambda_min_lb * Mat::Identity(n, n);   // eigs in [0, ub-lb]
  Mat shifted_down = g.lambda_max_ub * Mat::Identity(n, n) - Q;  // eigs in [0, ub-lb]

  double theta_max = 0.0, theta_min = 0.0;
  bool ok_max = dominant_eig(shifted_up, tol, max_iter, theta_max);
  bool ok_min = dominant_eig(shifted_down, tol, max_iter, theta_min);
  if (converged) *converged = ok_max && ok_min;
  if (!ok_max || !ok_min) return {g.lambda_min_lb, g.lambda_max_ub};
  return {g.lambda_max_ub - theta_min, g.lambda_min_lb + theta_max};
}

SpectralBounds spectral_bounds(const Mat& Q, double tol, long max_iter) {
  SpectralBounds b = gershgorin_bounds(Q);
  bool ok = false;
  auto [emin, emax] = power_iteration_extremes(Q, tol, max_iter, &ok);
  if (ok) {
    b.lambda_min_est = std::min(std::max(emin, b.lambda_min_lb), b.lambda_max_ub);
    b.lambda_max_est = std::min(std::max(emax, b.lambda_min_lb), b.lambda_max_ub);
    if (b.lambda_min_est > b.lambda_max_est) std::swap(b.lambda_min_est, b.lambda_max_est);
    b.estimates_converged = true;
  }
  return b;
}

double default_rho_margin(double bound) { return 1e-3 * (1.0 + std::abs(bound)); }

double choose_rho(const SpectralBounds& bounds, DcaScheme scheme, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("choose_rho: margin must be positive");
  double base = scheme == DcaScheme::A ? std::max(bounds.lambda_max_ub, 0.0)
                                       : std::max(-bounds.lambda_min_lb, 0.0);
  return base + margin;
}

double choose_rho(const Mat& Q, DcaScheme scheme, double margin) {
  return choose_rho(gershgorin_bounds(Q), scheme, margin);
}

double choose_rho(const Mat& Q, DcaScheme scheme) {
  SpectralBounds b = gershgorin_bounds(Q);
  double bound = scheme == DcaScheme::A ? b.lambda_max_ub : b.lambda_min_lb;
  return choose_rho(b, scheme, default_rho_margin(bound));
}

}  // namespace iqp
