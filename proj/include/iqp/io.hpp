#pragma once

#include <iosfwd>
#include <string>

#include "iqp/bench.hpp"
#include "iqp/dca.hpp"
#include "iqp/dynamics.hpp"
#include "iqp/scalar.hpp"

#include <json.hpp>

namespace iqp::io {

using LoadedProblem = std::variant<QuadraticProblem, AviProblem>;

/// Problem document:
///   { "kind": "qp"|"avi" (default qp), "n": int,
///     "Q": [[...], ...] (row-major), "q": [...],
///     "C": {"type":"box","lo":[...],"hi":[...]}
///        | {"type":"ball","a":[...],"r":1.0}
///        | {"type":"polyhedron","A":[[...]],"b":[...],"feasible_point":[...]}
///        | {"type":"unit_interval"} }
/// All construction invariants are enforced: a "qp" record with an
/// asymmetric Q or a polyhedron whose stored point is infeasible is rejected.
LoadedProblem parse_problem(const nlohmann::json& doc);
LoadedProblem load_problem(const std::string& path);

nlohmann::json problem_to_json(const QuadraticProblem& p);
nlohmann::json problem_to_json(const AviProblem& p);
nlohmann::json problem_to_json(const LoadedProblem& p);
void save_problem(const std::string& path, const LoadedProblem& p);

/// Result document: final point, residual, iterate count, termination reason.
nlohmann::json result_to_json(const Vec& final_point, double residual, long iterations,
                              Termination termination, double wall_time,
                              std::optional<double> rate = std::nullopt);

/// Header `t,x1,...,xn,dist_to_C`, one row per stored sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Header `alpha,beta,in_cone`, row-major over the map grid.
void write_cone_map_csv(std::ostream& os, const scalar::ConeMap& map);

/// Header `t_start,t_end,region,limit`, one row per closed-form piece.
void write_segments_csv(std::ostream& os, const scalar::ExactTrajectory& traj);

/// Header `instance,scheme,iters,time_s,residual,rate`.
void write_bench_csv(std::ostream& os, const bench::BenchReport& report);
nlohmann::json bench_summary_json(const bench::BenchReport& report);

void write_file(const std::string& path, const std::string& contents);

}  // namespace iqp::io
