#pragma once

#include <map>

#include "iqp/dca.hpp"
#include "iqp/dynamics.hpp"
#include "iqp/rng.hpp"

namespace iqp::bench {

enum class ConstraintKind { box, ball, polyhedron, unit_interval };

ConstraintKind constraint_kind_from_string(const std::string& s);
std::string to_string(ConstraintKind k);

/// Random-instance recipe. A fixed seed yields a byte-identical instance
/// stream; the draw order is documented in generate_instances.
struct InstanceSpec {
  int n = 2;
  ConstraintKind kind = ConstraintKind::box;
  std::uint64_t seed = 0;
  double scale = 1.0;    // entry scale for Q and q
  double density = 1.0;  // fraction of kept entries in the raw matrix
  int count = 1;
  bool indefinite = true;  // center the Gershgorin bracket on 0 (n >= 2)
};

/// Instances drawn from one xoshiro256++ stream seeded with spec.seed.
/// Per instance, in order: n*n raw entries for R (each: value in
/// scale*[-1,1], then a keep draw against density), then n entries of q,
/// then the constraint data. Q = (R+R')/2, shifted by the Gershgorin
/// midpoint when indefiniteness is requested and n >= 2. Constraint sets:
/// box [-1,1]^n; ball centered at 0 with radius sqrt(n); polyhedron
/// = unit box rows plus n random normalized rows with slack drawn from
/// [0.1, 1.1] (feasible point 0); unit_interval requires n == 1.
std::vector<QuadraticProblem> generate_instances(const InstanceSpec& spec);

enum class Method { dca_a, dca_b, ode_a, ode_b };
Method method_from_string(const std::string& s);
std::string to_string(Method m);

struct BenchRow {
  int instance = 0;
  Method method = Method::dca_a;
  long iters = 0;  // DCA iterations or integrator steps
  double time_s = 0.0;
  double residual = 0.0;
  std::optional<double> rate;
  Termination termination = Termination::max_iter;
  bool ok = false;  // run completed (residual may still exceed tolerance)
  std::string error;
};

struct MethodSummary {
  double median_iters = 0.0;
  double median_time_s = 0.0;
  double median_residual = 0.0;
  std::optional<double> median_rate;
  long failures = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::map<Method, MethodSummary> summary;
};

/// Runs every method on every instance. rho is chosen per instance by
/// choose_rho with the per-scheme margin (config.rho is ignored); per-row
/// failures are recorded, never thrown. Instances run on a worker pool and
/// the report is reduced in instance order, so the output is deterministic
/// up to the timing column.
BenchReport run_benchmark(const InstanceSpec& spec, const std::vector<Method>& methods,
                          const SolverConfig& config, double rho_margin = 0.5);

}  // namespace iqp::bench
