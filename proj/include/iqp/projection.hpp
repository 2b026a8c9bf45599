#pragma once

#include "iqp/types.hpp"

namespace iqp {

/// Output of a metric projection. active_set is populated for polyhedra only
/// (indices of facets tight at the solution); kkt_residual is the inner
/// certification residual (0 for the closed-form shapes).
struct ProjectionResult {
  Vec point;
  std::vector<int> active_set;
  double kkt_residual = 0.0;
};

/// Nearest point of C to u. Box: componentwise clamp. Ball: radial scaling
/// when strictly outside, identity otherwise. UnitInterval: clamp to [-1,1].
/// Polyhedron: primal active-set least-distance solve with lowest-index
/// anti-cycling, certified through the multipliers and a sampled variational
/// inequality. Throws on non-finite input or if the cycle guard trips.
ProjectionResult project(const ConstraintSet& C, const Vec& u);

/// Allocation-light projection used by inner loops; writes into out.
void project_into(const ConstraintSet& C, const Vec& u, Vec& out);

/// ||x - P_C(x)||, exact for all four shapes.
double dist_to_set(const ConstraintSet& C, const Vec& x);

/// True iff ||P_C(u) - P_C(v)|| <= ||u - v|| + 1e-10.
bool nonexpansiveness_check(const ConstraintSet& C, const Vec& u, const Vec& v);

}  // namespace iqp
