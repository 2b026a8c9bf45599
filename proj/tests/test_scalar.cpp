#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace iqp::scalar;
using iqp::Xoshiro256pp;

TEST_CASE("six-case classification on the pinned pairs") {
  auto v = classify_spm({0.0, 1.0});
  CHECK(v.cls == SpmClass::strongly_pseudomonotone);
  CHECK(*v.gamma == doctest::Approx(0.5));
  CHECK(v.in_cone);

  v = classify_spm({2.0, 0.0});
  CHECK(v.cls == SpmClass::strongly_monotone);
  CHECK(*v.gamma == doctest::Approx(2.0));

  v = classify_spm({-1.0, 2.0});
  CHECK(v.cls == SpmClass::strongly_pseudomonotone);
  CHECK(*v.gamma == doctest::Approx(0.5));

  v = classify_spm({-2.0, -3.0});
  CHECK(v.cls == SpmClass::strongly_pseudomonotone);
  CHECK(*v.gamma == doctest::Approx(0.5));

  v = classify_spm({-1.0, 0.0});
  CHECK(v.cls == SpmClass::not_pseudomonotone);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->first == -1.0);
  CHECK(v.witness->second == 1.0);
  CHECK_FALSE(v.in_cone);

  v = classify_spm({0.0, 0.0});
  CHECK(v.cls == SpmClass::identically_zero);
  CHECK_FALSE(v.in_cone);

  // boundary pair: alpha + beta = 0, alpha - beta < 0
  v = classify_spm({-1.0, 1.0});
  CHECK(v.cls == SpmClass::not_pseudomonotone);
  CHECK_FALSE(v.in_cone);
}

TEST_CASE("classifier witnesses defeat strong pseudomonotonicity directly") {
  Xoshiro256pp rng(1);
  int negatives = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    auto v = classify_spm({a, b});
    if (v.cls != SpmClass::not_pseudomonotone) continue;
    ++negatives;
    auto [x, y] = *v.witness;
    CHECK(x >= -1.0);
    CHECK(x <= 1.0);
    CHECK(y >= -1.0);
    CHECK(y <= 1.0);
    double premise = (a * x + b) * (y - x);
    double conclusion = (a * y + b) * (y - x);
    CHECK(premise >= -1e-15);
    CHECK(conclusion <= 1e-15);
    CHECK(y != x);
  }
  CHECK(negatives > 100);
}

TEST_CASE("falsifier matches the pinned examples") {
  auto w = falsify_spm(-1.0, 0.0, 101);
  REQUIRE(w.has_value());
  // any returned pair must be a genuine violation
  double premise = (-1.0 * w->first + 0.0) * (w->second - w->first);
  double conclusion = (-1.0 * w->second + 0.0) * (w->second - w->first);
  CHECK(premise >= 0.0);
  CHECK(conclusion <= 0.0);

  CHECK_FALSE(falsify_spm(0.0, 1.0, 1001).has_value());
  CHECK(estimate_gamma(0.0, 1.0, 1001) == doctest::Approx(0.5).epsilon(0.01));

  // the affine map -x + 1 on [0, 1/2] has modulus 1
  CHECK_FALSE(falsify_spm(-1.0, 1.0, 501, 0.0, 0.5).has_value());
  CHECK(estimate_gamma(-1.0, 1.0, 501, 0.0, 0.5) >= 1.0 - 0.01);

  // the zero map is defeated by any distinct pair
  CHECK(falsify_spm(0.0, 0.0, 11).has_value());

  CHECK_THROWS_AS(falsify_spm(1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("gamma estimates are two-sided tight on the four pinned pairs") {
  const std::pair<std::pair<double, double>, double> cases[] = {
      {{0.0, 1.0}, 0.5}, {{2.0, 0.0}, 2.0}, {{-1.0, 2.0}, 0.5}, {{-2.0, -3.0}, 0.5}};
  for (const auto& [ab, expected] : cases) {
    double est = estimate_gamma(ab.first, ab.second, 2001);
    CHECK(est >= expected - 0.02);
    CHECK(est <= expected + 0.02);
  }
}

TEST_CASE("classifier gamma always lower-bounds the sampled modulus") {
  Xoshiro256pp rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    auto v = classify_spm({a, b});
    if (!v.gamma) continue;
    CHECK(estimate_gamma(a, b, 301) >= *v.gamma - 0.02);
  }
}

TEST_CASE("classifier and falsifier agree on a dense parameter grid") {
  // 201 x 201 nodes over [-3,3]^2, falsifier grid 501
  const int nodes = 201;
  long disagreements = 0;
  for (int i = 0; i < nodes; ++i) {
    double a = -3.0 + 6.0 * i / (nodes - 1);
    for (int j = 0; j < nodes; ++j) {
      double b = -3.0 + 6.0 * j / (nodes - 1);
      bool witness = falsify_spm(a, b, 501).has_value();
      auto cls = classify_spm({a, b}).cls;
      bool negative =
          cls == SpmClass::not_pseudomonotone || cls == SpmClass::identically_zero;
      if (witness != negative) ++disagreements;
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("cone membership map and its cone/nonconvexity structure") {
  auto map = cone_membership_map(-3.0, 3.0, -3.0, 3.0, 121);
  auto lookup = [&](double a, double b) {
    int i = static_cast<int>(std::lround((a + 3.0) / 6.0 * 120));
    int j = static_cast<int>(std::lround((b + 3.0) / 6.0 * 120));
    return map.at(i, j);
  };
  CHECK(lookup(1.0, 0.0));
  CHECK_FALSE(lookup(0.0, 0.0));
  CHECK(lookup(-1.0, 2.0));
  CHECK_FALSE(lookup(-1.0, 1.0));  // alpha+beta = 0, alpha-beta = -2

  // scaling invariance of membership (nodes within rounding distance of the
  // boundary are skipped: multiplying by a non-dyadic lambda can flip the
  // sign of a 1-ulp margin)
  for (int i = 0; i < 121; ++i)
    for (int j = 0; j < 121; ++j) {
      double a = map.alphas[static_cast<size_t>(i)], b = map.betas[static_cast<size_t>(j)];
      if (!map.at(i, j)) continue;
      if (std::max(a + b, a - b) < 1e-9) continue;
      for (double lambda : {0.5, 2.0, 10.0}) {
        bool scaled = (lambda * a + lambda * b > 0.0) || (lambda * a - lambda * b > 0.0);
        CHECK(scaled);
      }
    }

  // sums of members may leave the set
  CHECK(lookup(-1.0, 2.0));
  CHECK(lookup(1.0, -2.0));
  CHECK_FALSE(lookup(0.0, 0.0));

  CHECK_THROWS_AS(cone_membership_map(0.0, 1.0, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("scalar KKT sets on the pinned problems") {
  auto s = scalar_kkt_set({-1.0, 0.0});
  REQUIRE(s.points.size() == 3);
  CHECK(s.contains(-1.0));
  CHECK(s.contains(0.0));
  CHECK(s.contains(1.0));
  CHECK_FALSE(s.contains(0.5));

  auto s2 = scalar_kkt_set({2.0, 1.0});
  REQUIRE(s2.points.size() == 1);
  CHECK(s2.points[0] == doctest::Approx(-0.5));

  auto s3 = scalar_kkt_set({0.0, 0.0});
  CHECK(s3.whole_interval);
  CHECK(s3.contains(0.123));

  // each reported point satisfies the defining inequality at the endpoints
  Xoshiro256pp rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    for (double x : scalar_kkt_set({a, b}).points) {
      double g = a * x + b;
      CHECK(g * (1.0 - x) >= -1e-12);
      CHECK(g * (-1.0 - x) >= -1e-12);
    }
  }
}

TEST_CASE("exact trajectories on the pinned instances") {
  // stationary interior start
  auto t1 = exact_trajectory({-1.0, 0.0}, 2.0, 1.0, 0.0);
  CHECK(t1.segments.size() == 1);
  CHECK(t1.limit == 0.0);
  CHECK(t1.eval(5.0) == 0.0);

  // left-branch decay to -1
  auto t2 = exact_trajectory({-1.0, 0.0}, 2.0, 1.0, -0.9);
  REQUIRE(t2.segments.size() == 1);
  CHECK(t2.segments[0].region == Region::L);
  CHECK(t2.limit == -1.0);
  CHECK(t2.eval(3.0) == doctest::Approx(0.1 * std::exp(-3.0) - 1.0).epsilon(1e-14));

  // boundary start alpha=0: drifts straight into the left branch
  auto t3 = exact_trajectory({0.0, 1.0}, 1.0, 1.0, 0.0);
  CHECK(t3.limit == -1.0);
  CHECK(t3.eval(1.0) == doctest::Approx(std::exp(-1.0) - 1.0).epsilon(1e-12));

  // contracting middle branch with rho >= alpha
  auto t4 = exact_trajectory({2.0, 1.0}, 3.0, 1.0, 1.0);
  REQUIRE(t4.segments.size() == 1);
  CHECK(t4.segments[0].region == Region::M);
  CHECK(t4.limit == doctest::Approx(-0.5).epsilon(1e-15));

  // rho < alpha (no guarantee claimed): still lands on the unique KKT point
  auto t5 = exact_trajectory({2.0, 1.0}, 1.0, 1.0, 1.0);
  REQUIRE(t5.segments.size() == 2);
  CHECK(t5.segments[0].region == Region::L);
  CHECK(t5.segments[0].t_end == doctest::Approx(std::log(2.0)));
  CHECK(t5.segments[1].region == Region::M);
  CHECK(t5.limit == doctest::Approx(-0.5));
  bool advisory = false;
  CHECK(trajectory_limit_is_kkt({2.0, 1.0}, 1.0, 1.0, 1.0, &advisory));
  CHECK(advisory);

  CHECK_THROWS_AS(exact_trajectory({1.0, 1.0}, 2.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(exact_trajectory({1.0, 1.0}, 0.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("segment states respect their region inequalities") {
  Xoshiro256pp rng(4);
  for (int trial = 0; trial < 400; ++trial) {
    auto tup = testsupport::draw_tuple(rng);
    ScalarProblem sp{tup.alpha, tup.beta};
    auto traj = exact_trajectory(sp, tup.rho, tup.eta, tup.x0);
    REQUIRE(!traj.segments.empty());
    CHECK(traj.segments.front().t_start == 0.0);
    for (size_t k = 0; k < traj.segments.size(); ++k) {
      const auto& seg = traj.segments[k];
      if (k + 1 < traj.segments.size())
        CHECK(seg.t_end == traj.segments[k + 1].t_start);  // contiguous in time
      double span = std::isinf(seg.t_end) ? 5.0 : seg.t_end - seg.t_start;
      for (double frac : {0.25, 0.5, 0.75}) {
        double t = seg.t_start + frac * span;
        double x = seg.eval(t - 0.0);
        Region r = classify_region(sp, tup.rho, x);
        // interior states match the segment's branch; boundary states read M
        if (r != seg.region) CHECK(r == Region::M);
        CHECK(x >= -1.0 - 1e-9);
        CHECK(x <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("scaled region tests agree with the ratio form when rho != alpha") {
  Xoshiro256pp rng(5);
  long checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto tup = testsupport::draw_tuple(rng);
    if (tup.rho == tup.alpha) continue;
    ScalarProblem sp{tup.alpha, tup.beta};
    double w = tup.rho - tup.alpha;
    double mu1 = (tup.beta - tup.rho) / w;
    double mu2 = (tup.beta + tup.rho) / w;
    double lo = std::min(mu1, mu2), hi = std::max(mu1, mu2);
    for (int s = 0; s < 20; ++s) {
      double x = rng.uniform(-1.0, 1.0);
      Region scaled = classify_region(sp, tup.rho, x);
      Region ratio = Region::M;
      if (w > 0.0) {
        if (x < lo) ratio = Region::L;
        else if (x > hi) ratio = Region::R;
      } else {
        if (x > hi) ratio = Region::L;
        else if (x < lo) ratio = Region::R;
      }
      CHECK(scaled == ratio);
      ++checked;
    }
    // segment switch points land exactly on the mu values
    auto traj = exact_trajectory(sp, tup.rho, tup.eta, tup.x0);
    for (size_t k = 1; k < traj.segments.size(); ++k) {
      double xb = traj.segments[k].x_start;
      CHECK(std::min(std::abs(xb - mu1), std::abs(xb - mu2)) <= 1e-12);
    }
  }
  CHECK(checked >= 10000);
}

TEST_CASE("exact engine agrees with RK4 and limits are KKT points") {
  Xoshiro256pp rng(6);
  for (int trial = 0; trial < 120; ++trial) {
    auto tup = testsupport::draw_tuple(rng);
    auto cmp = testsupport::compare_exact_vs_rk4(tup, 1e-4, 10);
    CHECK(cmp.max_pointwise_err <= 1e-6);
    CHECK(cmp.limit_err <= 1e-5);
    CHECK(cmp.limit_in_kkt);
    CHECK_FALSE(cmp.advisory);
  }
}
