#include <doctest.h>

#include "formguard/errors.hpp"
#include "formguard/formation.hpp"
#include "support.hpp"

using namespace formguard;
using namespace testing_support;

namespace {

std::vector<Vec> example_offsets() {
  return {Vec2(5, 0), Vec2(10, 14), Vec2(-10, 14)};
}

}  // namespace

TEST_CASE("local error vanishes in formation") {
  const auto g = example_graph();
  const FormationSpec spec(example_offsets());
  const Vec leader = Eigen::Vector2d(2, 4);
  std::vector<Vec> x;
  for (int i = 0; i < 3; ++i) x.push_back(leader - spec.offset(i));
  for (int i = 0; i < 3; ++i) CHECK(local_error(i, x, leader, g, spec).norm() == 0.0);
}

TEST_CASE("single pinned follower") {
  const DirectedWeightedGraph g(Mat::Zero(1, 1), Vec::Ones(1));
  const FormationSpec spec({Vec2(1, 0)});
  const Vec e = local_error(0, {Vec2(0, 0)}, Vec2(2, 2), g, spec);
  CHECK(e(0) == 1.0);
  CHECK(e(1) == 2.0);
}

TEST_CASE("example initial local errors by hand") {
  // ring 1->3->2->1: agent 1 hears 2 and the leader, agent 2 hears 3, agent 3 hears 1.
  const auto g = example_graph();
  const FormationSpec spec(example_offsets());
  const std::vector<Vec> x{Vec2(1, -1), Vec2(3, 4), Vec2(3, -5)};
  const Vec leader = Vec2(2, 4);
  // e1 = (x2 - x1 - (d1 - d2)) + (xl - x1 - d1) = (2,5) - (-5,-14) + (2,4) - (1,-1) - (5,0) = (3, 24)
  // e2 = x3 - x2 - (d2 - d3) = (0,-9) - (20,0) = (-20,-9)
  // e3 = x1 - x3 - (d3 - d1) = (-2,4) - (-15,14) = (13,-10)
  CHECK((local_error(0, x, leader, g, spec) - Vec2(3, 24)).norm() < 1e-15);
  CHECK((local_error(1, x, leader, g, spec) - Vec2(-20, -9)).norm() < 1e-15);
  CHECK((local_error(2, x, leader, g, spec) - Vec2(13, -10)).norm() < 1e-15);
}

TEST_CASE("global error equals stacked local errors and L̄δ") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 2 + trial % 4, n = 1 + trial % 3;
    const auto g = random_graph(rng, N);
    const auto bundle = build_laplacian(g, n);
    std::vector<Vec> d, x;
    for (int i = 0; i < N; ++i) {
      d.push_back(random_vec(rng, n, -5, 5));
      x.push_back(random_vec(rng, n, -10, 10));
    }
    const FormationSpec spec(d);
    const Vec leader = random_vec(rng, n, -10, 10);
    const Vec e = global_error(x, leader, bundle, spec);
    std::vector<Vec> locals;
    for (int i = 0; i < N; ++i) locals.push_back(local_error(i, x, leader, g, spec));
    CHECK((e - stack(locals)).norm() <= 1e-12 * (1 + e.norm()));
    const Vec delta = tracking_error(x, leader, spec);
    const auto lbar = oracle::kron_identity(to_oracle(bundle.LB), static_cast<std::size_t>(n));
    const Vec ref = from_oracle(oracle::multiply(lbar, to_oracle(delta)));
    CHECK((e - ref).norm() <= 1e-12 * (1 + e.norm()));
  }
}

TEST_CASE("control law arithmetic") {
  ControlGains gains{{Vec2(0.2, 0.2)}, 0.7, {Vec2(0.23, 0.23)}, std::nullopt};
  const Vec u0 = control_law(0, Vec2(3, -1), Vec2(0, 0), Vec2(0, 0), gains);
  CHECK((u0 - 0.7 * Vec2(3, -1)).norm() < 1e-15);
  const Vec u = control_law(0, Vec2(1, 0), Vec2(1, 1), Vec2(0, 0), gains);
  CHECK(u(0) == doctest::Approx(0.84).epsilon(1e-15));
  CHECK(u(1) == doctest::Approx(0.14).epsilon(1e-15));
  gains.state_gain = 1.0;
  const Vec us = control_law(0, Vec2(1, 0), Vec2(1, 1), Vec2(0.5, -0.5), gains);
  CHECK((us - Vec2(1 - 0.5 + 0.14, 0.5 + 0.14)).norm() < 1e-15);
}

TEST_CASE("formation spec") {
  const FormationSpec spec(example_offsets());
  CHECK(spec.relative(0, 1) == Vec2(-5, -14));
  CHECK(spec.bound() == doctest::Approx(spec.stacked().norm()));
  CHECK_THROWS_AS(FormationSpec(example_offsets(), 1.0), ConfigError);
  CHECK(FormationSpec(example_offsets(), 100.0).bound() == 100.0);
}

namespace {

ControlGains uniform(int N, double k, double c, double g, int n = 2) {
  ControlGains out;
  out.c = c;
  for (int i = 0; i < N; ++i) {
    out.k.push_back(Vec::Constant(n, k));
    out.observer.push_back(Vec::Constant(n, g));
  }
  return out;
}

}  // namespace

TEST_CASE("gain conditions for the example and their boundaries") {
  const auto bundle = build_laplacian(example_graph(), 2);
  const TuningParams tuning{0.1, 0.1};
  const auto report = validate_gains(uniform(3, 0.2, 0.7, 0.23), bundle, tuning, 1.212);
  CHECK(report.all_passed());
  REQUIRE(report.conditions.size() == 4);
  CHECK(report.conditions[0].id == "(28)");
  CHECK(report.conditions[3].id == "(31)");

  CHECK_FALSE(validate_gains(uniform(3, 0.0, 0.7, 0.23), bundle, tuning, 1.212).conditions[0].passed);
  const double phi = 2.0;
  const auto at_edge = validate_gains(uniform(3, 0.2, 0.1, 0.1), bundle, TuningParams{1.0 / (phi * phi), 0.1}, phi);
  CHECK_FALSE(at_edge.conditions[2].passed);
  CHECK(std::isnan(eta_factor(TuningParams{0.25, 0.1}, 2.0)));
  CHECK(eta_factor(TuningParams{0.1, 0.1}, 0.0) == 2.0);

  // worst-case activation makes (29) fail for the example
  const auto worst = validate_gains(uniform(3, 0.2, 0.7, 0.23), bundle, tuning, 3.0);
  REQUIRE(worst.first_failure() != nullptr);
  CHECK(worst.first_failure()->id == "(29)");
}
