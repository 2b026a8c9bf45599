#include "iqp/scalar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iqp::scalar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo + step * i;
  out.back() = hi;  // pin the endpoint
  return out;
}

}  // namespace

SpmVerdict classify_spm(const ScalarProblem& sp) {
  const double a = sp.alpha, b = sp.beta;
  SpmVerdict v;
  v.in_cone = (a + b > 0.0) || (a - b > 0.0);
  if (a == 0.0 && b == 0.0) {
    v.cls = SpmClass::identically_zero;
  } else if (a == 0.0) {
    v.cls = SpmClass::strongly_pseudomonotone;
    v.gamma = std::abs(b) / 2.0;
  } else if (a > 0.0) {
    v.cls = SpmClass::strongly_monotone;
    v.gamma = a;
  } else if (b == 0.0) {
    v.cls = SpmClass::not_pseudomonotone;
    v.witness = {-1.0, 1.0};
  } else if (b > 0.0) {
    if (a + b > 0.0) {
      v.cls = SpmClass::strongly_pseudomonotone;
      v.gamma = (a + b) / 2.0;
    } else if (a + b == 0.0) {
      v.cls = SpmClass::not_pseudomonotone;
      v.witness = {1.0, -1.0};
    } else {
      v.cls = SpmClass::not_pseudomonotone;
      v.witness = {-b / a, 1.0};
    }
  } else {  // a < 0, b < 0
    if (a > b) {
      v.cls = SpmClass::strongly_pseudomonotone;
      v.gamma = (a - b) / 2.0;
    } else {
      v.cls = SpmClass::not_pseudomonotone;
      v.witness = {-b / a, 1.0};
    }
  }
  return v;
}

std::optional<std::pair<double, double>> falsify_spm(double alpha, double beta, int grid_n,
                                                     double lo, double hi) {
  if (grid_n < 3) throw std::invalid_argument("falsify_spm: grid_n must be at least 3");
  std::vector<double> grid = linspace(lo, hi, grid_n);
  std::vector<double> fval(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) fval[i] = alpha * grid[i] + beta;

  for (size_t ix = 0; ix < grid.size(); ++ix) {
    const double x = grid[ix], fx = fval[ix];
    for (size_t iy = 0; iy < grid.size(); ++iy) {
      if (iy == ix) continue;
      const double d = grid[iy] - x;
      if (fx * d >= 0.0 && fval[iy] * d <= 0.0) return std::make_pair(x, grid[iy]);
    }
  }
  return std::nullopt;
}

double estimate_gamma(double alpha, double beta, int grid_n, double lo, double hi) {
  if (grid_n < 3) throw std::invalid_argument("estimate_gamma: grid_n must be at least 3");
  std::vector<double> grid = linspace(lo, hi, grid_n);
  std::vector<double> fval(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) fval[i] = alpha * grid[i] + beta;

  double best = kInf;
  for (size_t ix = 0; ix < grid.size(); ++ix) {
    const double x = grid[ix], fx = fval[ix];
    for (size_t iy = 0; iy < grid.size(); ++iy) {
      const double d = grid[iy] - x;
      if (std::abs(d) < 1e-9) continue;
      if (fx * d >= 0.0) {
        double ratio = fval[iy] * d / (d * d);
        if (ratio < best) best = ratio;
      }
    }
  }
  if (best == kInf) return kInf;
  return std::max(best, 0.0);
}

ConeMap cone_membership_map(double alpha_lo, double alpha_hi, double beta_lo, double beta_hi,
                            int resolution) {
  if (resolution < 2) throw std::invalid_argument("cone_membership_map: resolution must be >= 2");
  if (!std::isfinite(alpha_lo) || !std::isfinite(alpha_hi) || !std::isfinite(beta_lo) ||
      !std::isfinite(beta_hi))
    throw std::invalid_argument("cone_membership_map: ranges must be finite");
  ConeMap map;
  map.alphas = linspace(alpha_lo, alpha_hi, resolution);
  map.betas = linspace(beta_lo, beta_hi, resolution);
  map.in_cone.resize(map.alphas.size() * map.betas.size());
  for (size_t i = 0; i < map.alphas.size(); ++i)
    for (size_t j = 0; j < map.betas.size(); ++j) {
      double a = map.alphas[i], b = map.betas[j];
      map.in_cone[i * map.betas.size() + j] = (a + b > 0.0 || a - b > 0.0) ? 1 : 0;
    }
  return map;
}

bool ScalarKktSet::contains(double x, double tol) const {
  if (whole_interval) return x >= -1.0 - tol && x <= 1.0 + tol;
  for (double p : points)
    if (std::abs(x - p) <= tol) return true;
  return false;
}

ScalarKktSet scalar_kkt_set(const ScalarProblem& sp) {
  ScalarKktSet set;
  if (sp.alpha == 0.0 && sp.beta == 0.0) {
    set.whole_interval = true;
    return set;
  }
  if (sp.beta >= sp.alpha) set.points.push_back(-1.0);
  if (sp.alpha + sp.beta <= 0.0) set.points.push_back(1.0);
  if (sp.alpha != 0.0) {
    double interior = -sp.beta / sp.alpha;
    if (interior >= -1.0 && interior <= 1.0 && !set.contains(interior, 0.0))
      set.points.push_back(interior);
  }
  return set;
}

char region_letter(Region r) {
  switch (r) {
    case Region::L: return 'L';
    case Region::M: return 'M';
    case Region::R: return 'R';
  }
  return '?';
}

Region classify_region(const ScalarProblem& sp, double rho, double x) {
  const double w = rho - sp.alpha;
  const double s = w * x;
  if (s < sp.beta - rho) return Region::L;
  if (s > sp.beta + rho) return Region::R;
  return Region::M;
}

double TrajectorySegment::eval(double t) const {
  double tau = t - t_start;
  if (is_linear) return x_start + coeff * tau;
  return coeff * std::exp(rate * tau) + offset;
}

double ExactTrajectory::eval(double t) const {
  if (t < 0.0) throw std::invalid_argument("exact trajectory: t must be nonnegative");
  for (const auto& seg : segments)
    if (t < seg.t_end) return seg.eval(t);
  return segments.back().eval(t);
}

namespace {

enum class BoundaryHint { none, lower, upper };

struct FormParams {
  Region region;
  bool is_linear = false;
  double coeff = 0.0, rate = 0.0, offset = 0.0;  // exponential parts
};

FormParams make_form(Region r, const ScalarProblem& sp, double rho, double eta, double x_s) {
  FormParams f;
  f.region = r;
  switch (r) {
    case Region::L:
      f.coeff = x_s + 1.0;
      f.rate = -1.0 / eta;
      f.offset = -1.0;
      break;
    case Region::R:
      f.coeff = x_s - 1.0;
      f.rate = -1.0 / eta;
      f.offset = 1.0;
      break;
    case Region::M:
      if (sp.alpha != 0.0) {
        f.coeff = x_s + sp.beta / sp.alpha;
        f.rate = -sp.alpha / (eta * rho);
        f.offset = -sp.beta / sp.alpha;
      } else {
        f.is_linear = true;
        f.coeff = -sp.beta / (eta * rho);  // slope
      }
      break;
  }
  return f;
}

// Earliest tau > 0 with x(t_s + tau) == target for the given closed form,
// or +inf when the form never reaches it.
double crossing_time(const FormParams& f, double x_s, double target) {
  if (f.is_linear) {
    if (f.coeff == 0.0) return kInf;
    double tau = (target - x_s) / f.coeff;
    return tau > 0.0 ? tau : kInf;
  }
  if (f.coeff == 0.0) return kInf;
  double arg = (target - f.offset) / f.coeff;
  if (arg <= 0.0) return kInf;
  double tau = std::log(arg) / f.rate;
  return tau > 0.0 ? tau : kInf;
}

}  // namespace

ExactTrajectory exact_trajectory(const ScalarProblem& sp, double rho, double eta, double x0) {
  if (!(rho > 0.0)) throw std::invalid_argument("exact_trajectory: rho must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("exact_trajectory: eta must be positive");
  if (!(x0 >= -1.0 && x0 <= 1.0))
    throw std::invalid_argument("exact_trajectory: x0 must lie in [-1, 1]");
  if (!std::isfinite(sp.alpha) || !std::isfinite(sp.beta))
    throw std::invalid_argument("exact_trajectory: non-finite problem data");

  const double w = rho - sp.alpha;
  const double b_lo = sp.beta - rho;
  const double b_hi = sp.beta + rho;

  ExactTrajectory traj;
  double t_s = 0.0;
  double x_s = x0;
  BoundaryHint hint = BoundaryHint::none;

  auto emit = [&](const FormParams& f, double x_start, double t_end) {
    TrajectorySegment seg;
    seg.t_start = t_s;
    seg.t_end = t_end;
    seg.region = f.region;
    seg.x_start = x_start;
    seg.is_linear = f.is_linear;
    seg.coeff = f.coeff;
    seg.rate = f.rate;
    seg.offset = f.offset;
    traj.segments.push_back(seg);
  };

  auto emit_constant = [&](double value) {
    // Stationary state; recorded as a middle-region piece (boundary states
    // belong to M) with a vanishing exponential part.
    FormParams f;
    f.region = Region::M;
    f.coeff = 0.0;
    f.rate = -1.0 / eta;
    f.offset = value;
    emit(f, value, kInf);
    traj.limit = value;
  };

  for (int guard = 0;; ++guard) {
    if (guard > 1000) throw std::runtime_error("exact_trajectory: region switch guard exceeded");

    // Pick the closed form governing the next stretch of time. Strictly
    // inside a region the form is the region's own; exactly on a boundary
    // both adjacent forms agree at the point, so the motion direction
    // decides which one persists.
    Region form_region;
    if (hint == BoundaryHint::none) {
      if (w != 0.0) {
        // A start sitting on (or within rounding distance of) a switch value
        // must be routed through the motion-direction rule: the scaled test
        // w*x vs beta-+rho is 1-ulp ambiguous exactly there, and committing
        // to the wrong side would freeze the trajectory in a form whose
        // exit crossing computes as tau = 0 and gets rejected.
        double x_lo = b_lo / w, x_hi = b_hi / w;
        if (std::abs(x_s - x_lo) <=
            4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x_lo))) {
          x_s = x_lo;
          hint = BoundaryHint::lower;
          continue;
        }
        if (std::abs(x_s - x_hi) <=
            4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x_hi))) {
          x_s = x_hi;
          hint = BoundaryHint::upper;
          continue;
        }
      }
      double s = w * x_s;
      if (s < b_lo) {
        form_region = Region::L;
      } else if (s > b_hi) {
        form_region = Region::R;
      } else if (s > b_lo && s < b_hi) {
        form_region = Region::M;
      } else {
        hint = (s == b_lo) ? BoundaryHint::lower : BoundaryHint::upper;
        continue;
      }
    } else if (hint == BoundaryHint::lower) {
      // u(x) = -1 here, so eta*xdot = -1 - x exactly.
      double fdot = -1.0 - x_s;
      if (fdot == 0.0) {
        emit_constant(x_s);
        return traj;
      }
      if (w == 0.0) {
        form_region = Region::M;  // region test is x-free; M form covers it
      } else {
        form_region = (w * fdot < 0.0) ? Region::L : Region::M;
      }
      hint = BoundaryHint::none;
    } else {
      double fdot = 1.0 - x_s;
      if (fdot == 0.0) {
        emit_constant(x_s);
        return traj;
      }
      if (w == 0.0) {
        form_region = Region::M;
      } else {
        form_region = (w * fdot > 0.0) ? Region::R : Region::M;
      }
      hint = BoundaryHint::none;
    }

    FormParams f = make_form(form_region, sp, rho, eta, x_s);

    // Stationary forms never leave their region.
    if ((f.is_linear && f.coeff == 0.0) || (!f.is_linear && f.coeff == 0.0)) {
      emit(f, x_s, kInf);
      traj.limit = f.is_linear ? x_s : f.offset;
      return traj;
    }

    if (w == 0.0) {
      // Region membership does not depend on x: single segment for all time.
      // (w == 0 forces alpha == rho > 0, so the M form contracts.)
      emit(f, x_s, kInf);
      traj.limit = f.is_linear ? x_s : f.offset;
      return traj;
    }

    // Boundaries of the occupied region in x-space.
    double tau_lo = kInf, tau_hi = kInf;
    if (form_region == Region::L || form_region == Region::M)
      tau_lo = crossing_time(f, x_s, b_lo / w);
    if (form_region == Region::R || form_region == Region::M)
      tau_hi = crossing_time(f, x_s, b_hi / w);
    // L only borders the lower threshold, R only the upper.
    if (form_region == Region::L) tau_hi = kInf;
    if (form_region == Region::R) tau_lo = kInf;

    double tau = std::min(tau_lo, tau_hi);
    if (tau == kInf) {
      // only contracting forms may run forever: a drifting line or a growing
      // exponential always meets a switch value
      if ((f.is_linear && f.coeff != 0.0) || (!f.is_linear && f.rate > 0.0))
        throw std::logic_error("exact_trajectory: non-contracting form claims no exit");
      emit(f, x_s, kInf);
      traj.limit = f.is_linear ? x_s : f.offset;
      return traj;
    }

    emit(f, x_s, t_s + tau);
    bool crossed_lower = tau_lo <= tau_hi;
    t_s += tau;
    x_s = (crossed_lower ? b_lo : b_hi) / w;  // land exactly on the threshold
    hint = crossed_lower ? BoundaryHint::lower : BoundaryHint::upper;
  }
}

bool trajectory_limit_is_kkt(const ScalarProblem& sp, double rho, double eta, double x0,
                             bool* advisory) {
  bool hypotheses = sp.alpha <= 0.0 || rho >= sp.alpha;
  if (advisory) *advisory = !hypotheses;
  ExactTrajectory traj = exact_trajectory(sp, rho, eta, x0);
  return scalar_kkt_set(sp).contains(traj.limit, 1e-12);
}

}  // namespace iqp::scalar
