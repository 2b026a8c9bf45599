#include "iqp/dynamics.hpp"

#include <cmath>

namespace iqp {

namespace {

double two_norm_ub_nonsym(const Mat& M) {
  // ||M||_2 <= sqrt(||M||_1 ||M||_inf)
  double n1 = M.cwiseAbs().colwise().sum().maxCoeff();
  double ninf = M.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

constexpr double kInnerTol = 1e-12;  // SystemB proximal solve tolerance

}  // namespace

// Allocation-light field evaluation with an optional proximal warm start.
struct FieldEvaluator {
  const VectorField& f;
  Vec u, proj;
  Vec fc_warm;
  bool warm_valid = false;

  explicit FieldEvaluator(const VectorField& field) : f(field) {}

  const ConstraintSet& constraint() const {
    return std::visit([](const auto& p) -> const ConstraintSet& { return p.C; }, f.problem_);
  }

  void eval(const Vec& x, Vec& out) {
    if (!x.allFinite()) {
      out.setConstant(x.size(), std::numeric_limits<double>::quiet_NaN());
      return;
    }
    if (f.kind_ == SystemKind::SystemA) {
      if (std::holds_alternative<QuadraticProblem>(f.problem_)) {
        const auto& p = std::get<QuadraticProblem>(f.problem_);
        u.noalias() = p.Q * x;
        u += p.q;
        u = x - (1.0 / f.rho_) * u;
      } else {
        const auto& p = std::get<AviProblem>(f.problem_);
        u.noalias() = p.M * x;
        u += p.q;
        u = x - (1.0 / f.rho_) * u;
      }
      if (!u.allFinite()) {  // overflowed pre-projection state
        out.setConstant(x.size(), std::numeric_limits<double>::quiet_NaN());
        return;
      }
      project_into(constraint(), u, proj);
      out = (proj - x) / f.eta_;
    } else {
      const auto& p = std::get<QuadraticProblem>(f.problem_);
      proj = solve_subproblem_fc(p, f.rho_, x, kInnerTol, &f.bounds_, f.uncertified_,
                                 warm_valid ? &fc_warm : nullptr);
      fc_warm = proj;
      warm_valid = true;
      out = (proj - x) / f.eta_;
    }
  }
};

VectorField::VectorField(SystemKind kind, QuadraticProblem problem, double rho, double eta,
                         bool allow_uncertified_rho)
    : kind_(kind), problem_(std::move(problem)), rho_(rho), eta_(eta) {
  if (!(rho > 0.0)) throw std::invalid_argument("vector field: rho must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("vector field: eta must be positive");
  const auto& p = std::get<QuadraticProblem>(problem_);
  bounds_ = gershgorin_bounds(p.Q);
  op_norm_ub_ = sym_two_norm_ub(bounds_);
  uncertified_ = allow_uncertified_rho;
  if (kind_ == SystemKind::SystemB && !allow_uncertified_rho &&
      !(rho_ + bounds_.lambda_min_lb > 0.0))
    throw std::invalid_argument(
        "vector field: SystemB requires rho + lambda_min_lb > 0 (proximal map not certified)");
}

VectorField::VectorField(SystemKind kind, AviProblem problem, double rho, double eta)
    : kind_(kind), problem_(std::move(problem)), rho_(rho), eta_(eta) {
  if (!(rho > 0.0)) throw std::invalid_argument("vector field: rho must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("vector field: eta must be positive");
  if (kind_ == SystemKind::SystemB)
    throw std::invalid_argument("vector field: SystemB needs symmetric problem data");
  const auto& p = std::get<AviProblem>(problem_);
  op_norm_ub_ = two_norm_ub_nonsym(p.M);
}

int VectorField::dim() const {
  return std::visit([](const auto& p) { return p.dim(); }, problem_);
}

const ConstraintSet& VectorField::constraint_set() const {
  return std::visit([](const auto& p) -> const ConstraintSet& { return p.C; }, problem_);
}

Vec VectorField::eval(const Vec& x) const {
  if (x.size() != dim()) throw std::invalid_argument("vector field: dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("vector field: non-finite input");
  FieldEvaluator ev(*this);
  Vec out(dim());
  ev.eval(x, out);
  return out;
}

double VectorField::certified_lipschitz() const {
  if (kind_ == SystemKind::SystemA) return (op_norm_ub_ / rho_ + 2.0) / eta_;
  return (fc_lipschitz_constant(bounds_, rho_) + 1.0) / eta_;
}

double integrate_observe(const VectorField& field, const Vec& x0, const IntegrateOptions& opts,
                         const std::function<bool(double, const Vec&)>& observer) {
  if (!(opts.h > 0.0) || !(opts.horizon > 0.0))
    throw std::invalid_argument("integrate: h and horizon must be positive");
  if (x0.size() != field.dim()) throw std::invalid_argument("integrate: dimension mismatch");

  FieldEvaluator ev(field);
  const ConstraintSet& C = field.constraint_set();
  const int n = field.dim();
  Vec x = x0, stage(n), k1(n), k2(n), k3(n), k4(n);

  double violation = dist_to_set(C, x);
  if (!observer(0.0, x)) return violation;

  const long steps = static_cast<long>(std::ceil(opts.horizon / opts.h - 1e-9));
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    double h = std::min(opts.h, opts.horizon - t);
    ev.eval(x, k1);
    stage = x + (0.5 * h) * k1;
    ev.eval(stage, k2);
    stage = x + (0.5 * h) * k2;
    ev.eval(stage, k3);
    stage = x + h * k3;
    ev.eval(stage, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (s + 1 == steps) ? opts.horizon : t + h;
    if (!x.allFinite()) {
      observer(t, x);  // lets callers see the abort
      return violation;
    }
    violation = std::max(violation, dist_to_set(C, x));
    if (!observer(t, x)) break;
  }
  return violation;
}

Trajectory integrate(const VectorField& field, const Vec& x0, const IntegrateOptions& opts) {
  Trajectory traj;
  traj.started_in_set = field.constraint_set().contains(x0);
  const long stride = std::max(1L, opts.sample_stride);
  const ConstraintSet& C = field.constraint_set();

  long count = 0;
  bool finite = true;
  traj.invariance_violation =
      integrate_observe(field, x0, opts, [&](double t, const Vec& x) {
        if (!x.allFinite()) {
          finite = false;
          return false;
        }
        if (count % stride == 0 || t >= opts.horizon) {
          if (!traj.times.empty() && traj.times.back() == t) return true;
          traj.times.push_back(t);
          traj.points.push_back(x);
          traj.dists.push_back(dist_to_set(C, x));
        }
        ++count;
        return true;
      });
  traj.aborted_nonfinite = !finite;
  return traj;
}

std::pair<double, double> check_field_lipschitz(const VectorField& field,
                                                const std::vector<Vec>& samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("check_field_lipschitz: need at least 2 samples");
  std::vector<Vec> values;
  values.reserve(samples.size());
  FieldEvaluator ev(field);
  Vec out(field.dim());
  for (const auto& x : samples) {
    ev.eval(x, out);
    values.push_back(out);
  }
  double observed = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      double dx = (samples[i] - samples[j]).norm();
      if (dx <= 1e-14) continue;
      observed = std::max(observed, (values[i] - values[j]).norm() / dx);
    }
  }
  return {observed, field.certified_lipschitz()};
}

bool check_growth_bound(const VectorField& field, const std::vector<Vec>& samples,
                        double* worst_slack) {
  const ConstraintSet& C = field.constraint_set();
  Vec xbar = C.reference_point();
  const double eta = field.eta();
  const double rho = field.rho();

  double M, L;
  if (field.kind() == SystemKind::SystemA) {
    const Vec& q = field.is_avi() ? field.avi().q : field.quadratic().q;
    double qn = q.norm();
    double op_ub = field.is_avi() ? two_norm_ub_nonsym(field.avi().M)
                                  : sym_two_norm_ub(field.bounds());
    M = ((xbar - q).norm() + qn / rho) / eta;
    L = ((2.0 / rho) * op_ub + 1.0) / eta;
  } else {
    double ell = fc_lipschitz_constant(field.bounds(), rho);
    Vec fc = solve_subproblem_fc(field.quadratic(), rho, xbar, kInnerTol, &field.bounds());
    M = (ell * xbar.norm() + fc.norm()) / eta;
    L = (1.0 + ell) / eta;
  }

  FieldEvaluator ev(field);
  Vec out(field.dim());
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (const auto& x : samples) {
    ev.eval(x, out);
    double slack = M + L * x.norm() + 1e-9 - out.norm();
    worst = std::min(worst, slack);
    if (slack < 0.0) ok = false;
  }
  if (worst_slack) *worst_slack = worst;
  return ok;
}

std::optional<Vec> detect_limit(const Trajectory& traj, long window, double tol) {
  if (window < 1) throw std::invalid_argument("detect_limit: window must be positive");
  const long n = static_cast<long>(traj.points.size());
  if (n < window) throw std::invalid_argument("detect_limit: trajectory shorter than window");
  for (long i = n - window; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if ((traj.points[static_cast<size_t>(i)] - traj.points[static_cast<size_t>(j)]).norm() > tol)
        return std::nullopt;
  Vec mean = Vec::Zero(traj.points.back().size());
  for (long i = n - window; i < n; ++i) mean += traj.points[static_cast<size_t>(i)];
  return mean / static_cast<double>(window);
}

}  // namespace iqp
