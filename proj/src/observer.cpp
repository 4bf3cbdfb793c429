#include "formguard/observer.hpp"

#include "formguard/errors.hpp"

namespace formguard {

Vec observer_step(const Vec& x_i, const Vec& x_hat_i, const Vec& u_i, const Vec& e_i,
                  const Vec& f_hat_i, const Vec& observer_gain) {
  const auto n = x_i.size();
  require_dim(x_hat_i.size(), n, "observer estimate");
  require_dim(u_i.size(), n, "control input");
  require_dim(e_i.size(), n, "formation error");
  require_dim(f_hat_i.size(), n, "network estimate");
  require_dim(observer_gain.size(), n, "observer gain");
  return f_hat_i + u_i - observer_gain.cwiseProduct(x_i - x_hat_i) - e_i;
}

Vec attack_effect_s(int i, const AgentAttackInputs& attack, const Vec& x_i, const RbfBasis& basis,
                    const WeightMatrix& w_i, const DirectedWeightedGraph& g,
                    const Vec& observer_gain) {
  const auto n = x_i.size();
  require_dim(attack.actuator.size(), n, "actuator injection");
  require_dim(attack.sensor.size(), n, "sensor injection");
  require_dim(observer_gain.size(), n, "observer gain");
  require_dim(static_cast<long>(attack.neighbour.size()), g.size(), "neighbour injections");

  Vec s = attack.actuator + observer_gain.cwiseProduct(attack.sensor);
  if (attack.sensor_active) {
    s += estimate(basis, w_i, x_i) - estimate(basis, w_i, x_i + attack.sensor);
  }
  for (int j : g.in_neighbours(i)) {
    s -= g.weight(i, j) * (attack.sensor - attack.neighbour[j]);
  }
  s -= g.pin_gain(i) * attack.sensor;
  return s;
}

}  // namespace formguard
