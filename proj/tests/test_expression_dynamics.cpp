#include <doctest.h>

#include <cmath>

#include "formguard/dynamics.hpp"
#include "formguard/errors.hpp"
#include "formguard/expression.hpp"
#include "support.hpp"

using namespace formguard;
using namespace testing_support;

TEST_CASE("expression grammar") {
  CHECK(Expression("t + 2")(0.0) == 2.0);
  CHECK(Expression("8*t + 4")(1.0) == 12.0);
  CHECK(Expression("-(2 - 3) * 4 / 8")(0.0) == 0.5);
  CHECK(Expression("2*sin(t/4)")(50.0) == doctest::Approx(2 * std::sin(12.5)).epsilon(1e-15));
  CHECK(Expression("cos(pi)")(0.0) == doctest::Approx(-1.0));
  CHECK(Expression("1.5e-2")(0.0) == 0.015);
  CHECK(Expression("- -t")(3.0) == 3.0);
  CHECK(Expression().is_zero());
  CHECK(Expression("0")(5.0) == 0.0);
  for (const char* bad : {"", "t +", "sin t", "exp(t)", "2 ** t", "(t", "t)", "x", "1 2"}) {
    CHECK_THROWS_AS(Expression{bad}, ConfigError);
  }
}

TEST_CASE("leader and disturbance signals") {
  const VectorSignal leader({Expression("t + 2"), Expression("8*t + 4")});
  CHECK(leader(0.0) == Vec2(2, 4));
  CHECK(leader(1.0) == Vec2(3, 12));
  const VectorSignal still({Expression("1.5"), Expression("-2")});
  CHECK(still(0.0) == still(123.4));

  const VectorSignal w1({Expression("0.01*sin(2*t)"), Expression("0.05*sin(2*t)")});
  const VectorSignal w2({Expression("0.02*cos(3*t)"), Expression("0.05*cos(3*t)")});
  CHECK(w1(0.0).norm() == 0.0);
  CHECK(w2(0.0) == Vec2(0.02, 0.05));
  // sampled maximum over the horizon never exceeds the amplitude
  double peak = 0.0;
  for (long k = 0; k <= 100000; ++k) peak = std::max(peak, w2(k * 1e-3).norm());
  CHECK(peak <= std::hypot(0.02, 0.05) + 1e-15);
  CHECK(peak >= std::hypot(0.02, 0.05) * (1 - 1e-6));
  CHECK(VectorSignal::zero(3).is_zero());
}

TEST_CASE("dynamics registry") {
  const auto ex1 = make_dynamics({"paper_ex1", {}}, 2);
  CHECK(ex1.step(Vec2(0, 0), Vec::Zero(2), Vec::Zero(2)) == Vec2(0, 0));
  CHECK((ex1.step(Vec2(1, 1), Vec::Zero(2), Vec::Zero(2)) - Vec2(0.5, 0.5)).norm() < 1e-15);
  CHECK((ex1.step(Vec2(1, 1), Vec2(1, 2), Vec2(0.1, 0.2)) - Vec2(1.6, 2.7)).norm() < 1e-15);

  const auto id = make_dynamics({"linear", {1, 0, 0, 1}}, 2);
  CHECK(id.step(Vec2(3, -4), Vec::Zero(2), Vec::Zero(2)) == Vec2(3, -4));
  const auto rot = make_dynamics({"linear", {0, -1, 1, 0}}, 2);
  CHECK(rot.step(Vec2(1, 0), Vec::Zero(2), Vec::Zero(2)) == Vec2(0, 1));
  CHECK(make_dynamics({"zero", {}}, 3).drift(Vec::Ones(3)).isZero(0.0));

  CHECK_THROWS_AS(make_dynamics({"nope", {}}, 2), ConfigError);
  CHECK_THROWS_AS(make_dynamics({"paper_ex1", {}}, 3), ConfigError);
  CHECK_THROWS_AS(make_dynamics({"linear", {1, 2, 3}}, 2), ConfigError);
  CHECK(registered_dynamics().size() >= 3);
}
