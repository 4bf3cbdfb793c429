#include <doctest.h>

#include <cmath>

#include "formguard/attack.hpp"
#include "formguard/errors.hpp"
#include "formguard/formation.hpp"
#include "formguard/observer.hpp"
#include "support.hpp"

using namespace formguard;
using namespace testing_support;

namespace {

AttackSpec make(AttackKind kind, int target, std::optional<int> source, std::vector<std::string> sig) {
  std::vector<Expression> e;
  for (auto& s : sig) e.emplace_back(s);
  return AttackSpec{"a", kind, target, source, 50.0, 70.0, VectorSignal(e)};
}

}  // namespace

TEST_CASE("actuator injection") {
  const auto a = make(AttackKind::Actuator, 0, std::nullopt, {"2*sin(t/4)", "3*sin(4*t)"});
  const Vec u = Vec2(0.3, -0.7);
  CHECK(apply_actuator(u, a, 10.0) == u);
  CHECK(apply_actuator(u, a, 70.001) == u);
  const Vec at50 = apply_actuator(Vec::Zero(2), a, 50.0);
  CHECK(at50(0) == doctest::Approx(2 * std::sin(12.5)).epsilon(1e-15));
  CHECK(at50(1) == doctest::Approx(3 * std::sin(200.0)).epsilon(1e-15));
  CHECK(apply_actuator(u, a, 70.0) != u);  // inclusive window
  const Vec u2 = Vec2(5, 6);
  CHECK(((apply_actuator(u + u2, a, 55.0) - apply_actuator(u2, a, 55.0)) - u).norm() < 1e-14);
}

TEST_CASE("sensor injection") {
  const auto a = make(AttackKind::Sensor, 2, std::nullopt, {"4*sin(t/4)", "5*sin(5*t)"});
  const Vec x = Vec2(1, 2);
  CHECK(apply_sensor(x, a, 49.999) == x);
  const Vec s = apply_sensor(x, a, 60.0);
  CHECK(s(0) == doctest::Approx(1 + 4 * std::sin(15.0)).epsilon(1e-15));
  CHECK(s(1) == doctest::Approx(2 + 5 * std::sin(300.0)).epsilon(1e-15));
  const auto zero = make(AttackKind::Sensor, 2, std::nullopt, {"0", "0"});
  CHECK(apply_sensor(x, zero, 60.0) == x);
}

TEST_CASE("neighbour injection is scoped to one edge") {
  const auto a = make(AttackKind::Neighbour, 1, 2, {"-4*sin(t)", "3*cos(t)"});
  const Vec xb = Vec2(-1, 1);
  CHECK(apply_neighbour(xb, a, 20.0) == xb);
  const Vec c = apply_neighbour(xb, a, 55.0);
  CHECK(c(0) == doctest::Approx(-1 - 4 * std::sin(55.0)).epsilon(1e-15));
  CHECK(c(1) == doctest::Approx(1 + 3 * std::cos(55.0)).epsilon(1e-15));

  // source 0 sends to 1 and 2; only 0 -> 1 is attacked
  const auto g = DirectedWeightedGraph::from_edges(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 0, 1.0}, {2, 0, 1.0}},
                                                   Vec::Unit(3, 0));
  const auto edge = make(AttackKind::Neighbour, 1, 0, {"1", "2"});
  validate_attack(edge, g, 2, 100.0);
  const std::vector<Vec> x{Vec2(1, 1), Vec2(2, 2), Vec2(3, 3)};
  const auto view = make_channel_view(x, attack_inputs({edge}, 3, 2, 60.0));
  CHECK((view.received[1][0] - view.received[2][0] - Vec2(1, 2)).norm() == 0.0);
  CHECK(view.sensed[0] == x[0]);
}

TEST_CASE("attack validation") {
  const auto g = example_graph();
  auto bad_edge = make(AttackKind::Neighbour, 1, 0, {"1", "1"});  // no edge 1 -> 2 in the ring
  CHECK_THROWS_AS(validate_attack(bad_edge, g, 2, 100.0), ConfigError);
  auto ok = make(AttackKind::Neighbour, 1, 2, {"1", "1"});
  CHECK_NOTHROW(validate_attack(ok, g, 2, 100.0));
  auto late = make(AttackKind::Actuator, 0, std::nullopt, {"1", "1"});
  CHECK_THROWS_AS(validate_attack(late, g, 2, 60.0), ConfigError);
  auto wrong_dim = make(AttackKind::Actuator, 0, std::nullopt, {"1"});
  CHECK_THROWS_AS(validate_attack(wrong_dim, g, 2, 100.0), ConfigError);
  CHECK(attack_kind_from_string("neighbor") == AttackKind::Neighbour);
  CHECK_THROWS_AS(attack_kind_from_string("jam"), ConfigError);
}

TEST_CASE("observer step") {
  // perfect model: f̂ = f, w = 0, e = 0, x̂ = x  =>  x̂⁺ = x⁺
  const Vec x = Vec2(0.4, -1.2), u = Vec2(0.1, 0.2), f = Vec2(0.3, 0.7), g = Vec2(0.23, 0.23);
  CHECK((observer_step(x, x, u, Vec::Zero(2), f, g) - (f + u)).norm() < 1e-15);
  // scalar contraction: x̃ = 1, G = 0.5 → x̃⁺ = 0.5
  const Vec x1 = Vec::Ones(1), zero = Vec::Zero(1);
  const Vec xh_next = observer_step(x1, zero, zero, zero, zero, Vec::Constant(1, 0.5));
  const Vec x_next = zero;  // true plant with f = u = w = 0
  CHECK((x_next - xh_next)(0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("attack effect reduces correctly") {
  const auto g = example_graph();
  const auto basis = RbfGridLayout{{3, 3}, -5, 5, 10}.build();
  std::mt19937_64 rng(31);
  WeightMatrix w(9, 2);
  for (int j = 0; j < 9; ++j) w.row(j) = random_vec(rng, 2).transpose();
  const auto none = attack_inputs({}, 3, 2, 60.0);
  CHECK(attack_effect_s(0, none[0], Vec2(1, 1), basis, w, g, Vec2(0.23, 0.23)).norm() == 0.0);

  const auto act = make(AttackKind::Actuator, 0, std::nullopt, {"2*sin(t/4)", "3*sin(4*t)"});
  const auto in = attack_inputs({act}, 3, 2, 60.0);
  const Vec s = attack_effect_s(0, in[0], Vec2(1, 1), basis, w, g, Vec2(0.23, 0.23));
  CHECK((s - act.signal(60.0)).norm() == 0.0);
}
