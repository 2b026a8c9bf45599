#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "iqp/io.hpp"
#include "iqp/rng.hpp"

using namespace iqp;

namespace {

Mat mat1(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

Vec vec1(double v) {
  Vec x(1);
  x[0] = v;
  return x;
}

std::string write_temp(const std::string& name, const std::string& contents) {
  std::string path = std::string("core_") + name;
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("objective value matches direct evaluation") {
  QuadraticProblem p1(mat1(-1.0), vec1(0.0), ConstraintSet::unit_interval());
  CHECK(objective_value(p1, vec1(1.0)) == doctest::Approx(-0.5).epsilon(1e-15));

  Mat Q2 = 2.0 * Mat::Identity(2, 2);
  Vec q2(2);
  q2 << 1.0, 1.0;
  QuadraticProblem p2(Q2, q2, ConstraintSet::box(Vec::Constant(2, -5.0), Vec::Constant(2, 5.0)));
  CHECK(objective_value(p2, Vec::Zero(2)) == 0.0);

  Mat Q3(2, 2);
  Q3 << 0.0, 2.0, 2.0, 0.0;
  Vec q3(2);
  q3 << -1.0, 0.0;
  QuadraticProblem p3(Q3, q3, ConstraintSet::box(Vec::Constant(2, -5.0), Vec::Constant(2, 5.0)));
  Vec x3(2);
  x3 << 1.0, 1.0;
  // brute-force expansion: 0.5*(x'Qx) = 2*x1*x2 = 2, q'x = -1
  double brute = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) brute += 0.5 * Q3(i, j) * x3[i] * x3[j];
  brute += q3.dot(x3);
  CHECK(brute == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(objective_value(p3, x3) == doctest::Approx(brute).epsilon(1e-15));

  CHECK_THROWS_AS(objective_value(p3, vec1(0.0)), std::invalid_argument);
}

TEST_CASE("asymmetric matrices are rejected for quadratic problems") {
  Mat Q(2, 2);
  Q << 0.0, 1.0, 1.0 + 1e-6, 0.0;
  Vec q = Vec::Zero(2);
  auto C = ConstraintSet::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
  CHECK_THROWS_AS(QuadraticProblem(Q, q, C), std::invalid_argument);
  CHECK_NOTHROW(AviProblem(Q, q, C));

  Mat Qok(2, 2);
  Qok << 0.0, 1.0, 1.0 + 1e-13, 0.0;  // inside the symmetry tolerance
  CHECK_NOTHROW(QuadraticProblem(Qok, q, C));
}

TEST_CASE("constraint set invariants") {
  CHECK_THROWS_AS(ConstraintSet::box(vec1(1.0), vec1(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSet::ball(vec1(0.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSet::ball(vec1(0.0), -1.0), std::invalid_argument);

  Mat A(1, 1);
  A << 1.0;
  CHECK_THROWS_AS(ConstraintSet::polyhedron(A, vec1(-1.0), vec1(0.0)), std::invalid_argument);
  CHECK_NOTHROW(ConstraintSet::polyhedron(A, vec1(1.0), vec1(0.0)));

  auto interval = ConstraintSet::unit_interval();
  CHECK(interval.dim() == 1);
  CHECK(interval.contains(vec1(1.0)));
  CHECK(interval.contains(vec1(1.0 + 5e-11)));
  CHECK_FALSE(interval.contains(vec1(1.1)));
}

TEST_CASE("problem files load and validate") {
  std::string p1 = write_temp("tiny.json", R"({
    "n": 1, "Q": [[-1.0]], "q": [0.0], "C": {"type": "unit_interval"}
  })");
  auto loaded = io::load_problem(p1);
  REQUIRE(std::holds_alternative<QuadraticProblem>(loaded));
  const auto& qp = std::get<QuadraticProblem>(loaded);
  CHECK(qp.dim() == 1);
  CHECK(qp.Q(0, 0) == -1.0);
  CHECK(qp.C.is_unit_interval());

  std::string p2 = write_temp("box.json", R"({
    "n": 1, "Q": [[1.0]], "q": [0.0],
    "C": {"type": "box", "lo": [0.0], "hi": [0.5]}
  })");
  auto boxed = io::load_problem(p2);
  CHECK(std::get<QuadraticProblem>(boxed).C.is_box());

  std::string p3 = write_temp("ball.json", R"({
    "n": 2, "Q": [[1.0, 0.0], [0.0, 1.0]], "q": [0.0, 0.0],
    "C": {"type": "ball", "a": [0.0, 0.0], "r": 1.0}
  })");
  CHECK(std::get<QuadraticProblem>(io::load_problem(p3)).C.is_ball());

  std::string bad = write_temp("asym.json", R"({
    "n": 2, "Q": [[0.0, 1.0], [2.0, 0.0]], "q": [0.0, 0.0],
    "C": {"type": "ball", "a": [0.0, 0.0], "r": 1.0}
  })");
  CHECK_THROWS_AS(io::load_problem(bad), std::invalid_argument);

  std::string avi = write_temp("avi.json", R"({
    "kind": "avi",
    "n": 2, "Q": [[0.0, 1.0], [2.0, 0.0]], "q": [0.0, 0.0],
    "C": {"type": "ball", "a": [0.0, 0.0], "r": 1.0}
  })");
  CHECK(std::holds_alternative<AviProblem>(io::load_problem(avi)));

  std::string infeasible = write_temp("infeasible.json", R"({
    "n": 1, "Q": [[1.0]], "q": [0.0],
    "C": {"type": "polyhedron", "A": [[1.0]], "b": [-1.0], "feasible_point": [0.0]}
  })");
  CHECK_THROWS_AS(io::load_problem(infeasible), std::invalid_argument);

  CHECK_THROWS_AS(io::load_problem("does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("serialize/load round-trip is exact") {
  Xoshiro256pp rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng.next() % 5);
    Mat R(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) = rng.symmetric();
    Mat Q = 0.5 * (R + R.transpose());
    Vec q(n);
    for (int i = 0; i < n; ++i) q[i] = rng.symmetric();
    ConstraintSet C = [&]() {
      switch (trial % 4) {
        case 0: return ConstraintSet::box(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0));
        case 1: return ConstraintSet::ball(Vec::Zero(n), 1.0 + rng.uniform01());
        case 2: {
          Mat A = Mat::Identity(n, n);
          return ConstraintSet::polyhedron(A, Vec::Constant(n, 1.0 + rng.uniform01()),
                                           Vec::Zero(n));
        }
        default: return ConstraintSet::unit_interval();
      }
    }();
    if (C.is_unit_interval() && n != 1) C = ConstraintSet::ball(Vec::Zero(n), 2.0);
    QuadraticProblem p(Q, q, C);

    std::string path = "core_roundtrip.json";
    io::save_problem(path, io::LoadedProblem(p));
    auto back = io::load_problem(path);
    const auto& p2 = std::get<QuadraticProblem>(back);
    CHECK(p2.Q == p.Q);  // bitwise equality after the decimal round-trip
    CHECK(p2.q == p.q);
    // and the serialized form itself is stable
    CHECK(io::problem_to_json(p).dump() == io::problem_to_json(p2).dump());
  }
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.rho = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.rho = 1.0;
  c.h = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
