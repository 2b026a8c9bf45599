#include "iqp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace iqp::bench {

ConstraintKind constraint_kind_from_string(const std::string& s) {
  if (s == "box") return ConstraintKind::box;
  if (s == "ball") return ConstraintKind::ball;
  if (s == "polyhedron") return ConstraintKind::polyhedron;
  if (s == "unit_interval") return ConstraintKind::unit_interval;
  throw std::invalid_argument("unknown constraint kind: " + s);
}

std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::box: return "box";
    case ConstraintKind::ball: return "ball";
    case ConstraintKind::polyhedron: return "polyhedron";
    case ConstraintKind::unit_interval: return "unit_interval";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "a") return Method::dca_a;
  if (s == "b") return Method::dca_b;
  if (s == "ode-a") return Method::ode_a;
  if (s == "ode-b") return Method::ode_b;
  throw std::invalid_argument("unknown method: " + s + " (expected a|b|ode-a|ode-b)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::dca_a: return "a";
    case Method::dca_b: return "b";
    case Method::ode_a: return "ode-a";
    case Method::ode_b: return "ode-b";
  }
  return "?";
}

namespace {

ConstraintSet make_constraint(const InstanceSpec& spec, Xoshiro256pp& rng) {
  const int n = spec.n;
  switch (spec.kind) {
    case ConstraintKind::box:
      return ConstraintSet::box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
    case ConstraintKind::ball:
      return ConstraintSet::ball(Vec::Zero(n), std::sqrt(static_cast<double>(n)));
    case ConstraintKind::unit_interval:
      if (n != 1) throw std::invalid_argument("unit_interval instances require n == 1");
      return ConstraintSet::unit_interval();
    case ConstraintKind::polyhedron: {
      // Unit box rows keep the set compact; the extra random facets all
      // contain the origin with positive slack, which doubles as the
      // certified feasible point.
      const int extra = n;
      Mat A(2 * n + extra, n);
      Vec b(2 * n + extra);
      A.setZero();
      for (int i = 0; i < n; ++i) {
        A(i, i) = 1.0;
        b[i] = 1.0;
        A(n + i, i) = -1.0;
        b[n + i] = 1.0;
      }
      for (int r = 0; r < extra; ++r) {
        Vec row(n);
        for (int j = 0; j < n; ++j) row[j] = rng.symmetric();
        double norm = row.norm();
        if (norm < 1e-12) {
          row.setZero();
          row[0] = 1.0;
          norm = 1.0;
        }
        A.row(2 * n + r) = row.transpose() / norm;
        b[2 * n + r] = rng.uniform(0.1, 1.1);
      }
      return ConstraintSet::polyhedron(std::move(A), std::move(b), Vec::Zero(n));
    }
  }
  throw std::logic_error("unreachable");
}

QuadraticProblem draw_instance(const InstanceSpec& spec, Xoshiro256pp& rng) {
  const int n = spec.n;
  Mat R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double value = spec.scale * rng.symmetric();
      double keep = rng.uniform01();  // drawn unconditionally: stream layout is fixed
      R(i, j) = keep <= spec.density ? value : 0.0;
    }
  Mat Q = 0.5 * (R + R.transpose());
  if (spec.indefinite && n >= 2) {
    SpectralBounds g = gershgorin_bounds(Q);
    Q -= 0.5 * (g.lambda_min_lb + g.lambda_max_ub) * Mat::Identity(n, n);
  }
  Vec q(n);
  for (int i = 0; i < n; ++i) q[i] = spec.scale * rng.symmetric();
  return QuadraticProblem(std::move(Q), std::move(q), make_constraint(spec, rng));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

BenchRow run_one(const QuadraticProblem& p, int index, Method method,
                 const SolverConfig& base_config, double rho_margin) {
  BenchRow row;
  row.instance = index;
  row.method = method;
  auto t0 = std::chrono::steady_clock::now();
  try {
    SolverConfig config = base_config;
    DcaScheme scheme =
        (method == Method::dca_a || method == Method::ode_a) ? DcaScheme::A : DcaScheme::B;
    config.rho = choose_rho(p.Q, scheme, rho_margin);
    Vec x0 = p.C.reference_point();

    if (method == Method::dca_a || method == Method::dca_b) {
      DcaRun run = run_dca(p, scheme, config, x0);
      row.iters = static_cast<long>(run.trace.iterates.size()) - 1;
      row.residual = kkt_residual(p, run.final_point).value;  // fresh evaluation
      row.rate = run.rate_estimate;
      row.termination = run.trace.termination;
    } else {
      VectorField field(method == Method::ode_a ? SystemKind::SystemA : SystemKind::SystemB,
                        p, config.rho, config.eta);
      IntegrateOptions opts;
      opts.h = config.h;
      opts.horizon = config.horizon;
      opts.sample_stride = std::max<long>(1, static_cast<long>(config.horizon / config.h) / 512);
      Trajectory traj = integrate(field, x0, opts);
      row.iters = static_cast<long>(std::ceil(config.horizon / config.h - 1e-9));
      Vec final_point = traj.points.back();
      auto settled = detect_limit(traj, std::min<long>(8, traj.points.size()),
                                  10.0 * config.residual_tol);
      if (settled) final_point = *settled;
      row.residual = kkt_residual(p, final_point).value;
      row.termination = row.residual <= config.residual_tol ? Termination::residual_tol
                                                            : Termination::max_time;
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::vector<QuadraticProblem> generate_instances(const InstanceSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("instance spec: n must be >= 1");
  if (spec.count < 0) throw std::invalid_argument("instance spec: count must be >= 0");
  if (!(spec.scale > 0.0)) throw std::invalid_argument("instance spec: scale must be positive");
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw std::invalid_argument("instance spec: density must lie in (0, 1]");
  Xoshiro256pp rng(spec.seed);
  std::vector<QuadraticProblem> out;
  out.reserve(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) out.push_back(draw_instance(spec, rng));
  return out;
}

BenchReport run_benchmark(const InstanceSpec& spec, const std::vector<Method>& methods,
                          const SolverConfig& config, double rho_margin) {
  config.validate();
  std::vector<QuadraticProblem> instances = generate_instances(spec);
  BenchReport report;
  if (methods.empty() || instances.empty()) return report;

  const size_t total = instances.size();
  std::vector<std::vector<BenchRow>> per_instance(total);

  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(total)));
  std::atomic<size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= total) return;
      for (Method m : methods)
        per_instance[i].push_back(run_one(instances[i], static_cast<int>(i), m, config, rho_margin));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (auto& rows : per_instance)
    for (auto& r : rows) report.rows.push_back(std::move(r));

  for (Method m : methods) {
    MethodSummary s;
    std::vector<double> iters, times, residuals, rates;
    for (const auto& r : report.rows) {
      if (r.method != m) continue;
      if (!r.ok) {
        ++s.failures;
        continue;
      }
      iters.push_back(static_cast<double>(r.iters));
      times.push_back(r.time_s);
      residuals.push_back(r.residual);
      if (r.rate) rates.push_back(*r.rate);
    }
    s.median_iters = median(iters);
    s.median_time_s = median(times);
    s.median_residual = median(residuals);
    if (!rates.empty()) s.median_rate = median(rates);
    report.summary[m] = s;
  }
  return report;
}

}  // namespace iqp::bench
