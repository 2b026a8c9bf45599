#include "iqp/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace iqp::io {

namespace {

using nlohmann::json;

Vec vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string("problem file: ") + what +
                                                 " must be an array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Mat mat_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string("problem file: ") + what +
                                " must be a nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Mat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw std::invalid_argument(std::string("problem file: ragged rows in ") + what);
    for (size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json mat_to_json(const Mat& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

ConstraintSet constraint_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("problem file: C must be a tagged object");
  std::string type = j.at("type").get<std::string>();
  if (type == "box")
    return ConstraintSet::box(vec_from_json(j.at("lo"), "C.lo"), vec_from_json(j.at("hi"), "C.hi"));
  if (type == "ball")
    return ConstraintSet::ball(vec_from_json(j.at("a"), "C.a"), j.at("r").get<double>());
  if (type == "polyhedron")
    return ConstraintSet::polyhedron(mat_from_json(j.at("A"), "C.A"),
                                     vec_from_json(j.at("b"), "C.b"),
                                     vec_from_json(j.at("feasible_point"), "C.feasible_point"));
  if (type == "unit_interval") return ConstraintSet::unit_interval();
  throw std::invalid_argument("problem file: unknown constraint type '" + type + "'");
}

json constraint_to_json(const ConstraintSet& C) {
  return std::visit(
      [&](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return {{"type", "box"}, {"lo", vec_to_json(s.lo)}, {"hi", vec_to_json(s.hi)}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"}, {"a", vec_to_json(s.center)}, {"r", s.radius}};
        } else if constexpr (std::is_same_v<T, Polyhedron>) {
          return {{"type", "polyhedron"},
                  {"A", mat_to_json(s.A)},
                  {"b", vec_to_json(s.b)},
                  {"feasible_point", vec_to_json(s.feasible_point)}};
        } else {
          return {{"type", "unit_interval"}};
        }
      },
      C.shape());
}

}  // namespace

LoadedProblem parse_problem(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("problem file: root must be an object");
  for (const char* field : {"n", "Q", "q", "C"})
    if (!doc.contains(field))
      throw std::invalid_argument(std::string("problem file: missing field '") + field + "'");
  const int n = doc.at("n").get<int>();
  Mat Q = mat_from_json(doc.at("Q"), "Q");
  Vec q = vec_from_json(doc.at("q"), "q");
  if (Q.rows() != n || Q.cols() != n || q.size() != n)
    throw std::invalid_argument("problem file: n does not match Q/q shapes");
  ConstraintSet C = constraint_from_json(doc.at("C"));
  std::string kind = doc.value("kind", "qp");
  if (kind == "qp") return QuadraticProblem(std::move(Q), std::move(q), std::move(C));
  if (kind == "avi") return AviProblem(std::move(Q), std::move(q), std::move(C));
  throw std::invalid_argument("problem file: kind must be 'qp' or 'avi'");
}

LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("problem file parse error (" + path + "): " + e.what());
  }
  return parse_problem(doc);
}

nlohmann::json problem_to_json(const QuadraticProblem& p) {
  return {{"kind", "qp"},
          {"n", p.dim()},
          {"Q", mat_to_json(p.Q)},
          {"q", vec_to_json(p.q)},
          {"C", constraint_to_json(p.C)}};
}

nlohmann::json problem_to_json(const AviProblem& p) {
  return {{"kind", "avi"},
          {"n", p.dim()},
          {"Q", mat_to_json(p.M)},
          {"q", vec_to_json(p.q)},
          {"C", constraint_to_json(p.C)}};
}

nlohmann::json problem_to_json(const LoadedProblem& p) {
  return std::visit([](const auto& inner) { return problem_to_json(inner); }, p);
}

void save_problem(const std::string& path, const LoadedProblem& p) {
  write_file(path, problem_to_json(p).dump(2) + "\n");
}

nlohmann::json result_to_json(const Vec& final_point, double residual, long iterations,
                              Termination termination, double wall_time,
                              std::optional<double> rate) {
  json j = {{"final_point", vec_to_json(final_point)},
            {"residual", residual},
            {"iterations", iterations},
            {"termination", to_string(termination)},
            {"wall_time_s", wall_time}};
  if (rate) j["rate_estimate"] = *rate;
  return j;
}

namespace {

void print_double(std::ostream& os, double v) {
  char buf[32];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  os.write(buf, len);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const Eigen::Index n = traj.points.empty() ? 0 : traj.points.front().size();
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
  os << ",dist_to_C\n";
  for (size_t k = 0; k < traj.points.size(); ++k) {
    print_double(os, traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      os << ',';
      print_double(os, traj.points[k][i]);
    }
    os << ',';
    print_double(os, traj.dists[k]);
    os << '\n';
  }
}

void write_cone_map_csv(std::ostream& os, const scalar::ConeMap& map) {
  os << "alpha,beta,in_cone\n";
  for (size_t i = 0; i < map.alphas.size(); ++i)
    for (size_t j = 0; j < map.betas.size(); ++j) {
      print_double(os, map.alphas[i]);
      os << ',';
      print_double(os, map.betas[j]);
      os << ',' << (map.at(static_cast<int>(i), static_cast<int>(j)) ? 1 : 0) << '\n';
    }
}

void write_segments_csv(std::ostream& os, const scalar::ExactTrajectory& traj) {
  os << "t_start,t_end,region,limit\n";
  for (const auto& seg : traj.segments) {
    print_double(os, seg.t_start);
    os << ',';
    if (std::isinf(seg.t_end))
      os << "inf";
    else
      print_double(os, seg.t_end);
    os << ',' << scalar::region_letter(seg.region) << ',';
    print_double(os, traj.limit);
    os << '\n';
  }
}

void write_bench_csv(std::ostream& os, const bench::BenchReport& report) {
  os << "instance,scheme,iters,time_s,residual,rate\n";
  for (const auto& r : report.rows) {
    os << r.instance << ',' << bench::to_string(r.method) << ',' << r.iters << ',';
    print_double(os, r.time_s);
    os << ',';
    print_double(os, r.residual);
    os << ',';
    if (r.rate)
      print_double(os, *r.rate);
    else
      os << "na";
    os << '\n';
  }
}

nlohmann::json bench_summary_json(const bench::BenchReport& report) {
  json methods = json::object();
  for (const auto& [m, s] : report.summary) {
    json entry = {{"median_iters", s.median_iters},
                  {"median_time_s", s.median_time_s},
                  {"median_residual", s.median_residual},
                  {"failures", s.failures}};
    if (s.median_rate) entry["median_rate"] = *s.median_rate;
    methods[bench::to_string(m)] = entry;
  }
  return {{"methods", methods}, {"rows", report.rows.size()}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << contents;
}

}  // namespace iqp::io
