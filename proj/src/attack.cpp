#include "formguard/attack.hpp"

#include <fmt/format.h>

#include "formguard/errors.hpp"

namespace formguard {

const char* to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Actuator: return "actuator";
    case AttackKind::Sensor: return "sensor";
    case AttackKind::Neighbour: return "neighbour";
  }
  return "?";
}

AttackKind attack_kind_from_string(const std::string& s) {
  if (s == "actuator") return AttackKind::Actuator;
  if (s == "sensor") return AttackKind::Sensor;
  if (s == "neighbour" || s == "neighbor") return AttackKind::Neighbour;
  throw ConfigError("unknown attack kind '" + s + "'");
}

void validate_attack(const AttackSpec& spec, const DirectedWeightedGraph& g, int state_dim,
                     double horizon_s) {
  const auto where = fmt::format("attack '{}'", spec.id);
  if (spec.target < 0 || spec.target >= g.size()) {
    throw ConfigError(where + ": target agent does not exist");
  }
  if (spec.signal.size() != state_dim) {
    throw ConfigError(where + ": signal must have one expression per state coordinate");
  }
  if (!(spec.start_s >= 0.0 && spec.start_s <= spec.end_s && spec.end_s <= horizon_s)) {
    throw ConfigError(where + fmt::format(": window [{}, {}] s must lie inside [0, {}] s",
                                          spec.start_s, spec.end_s, horizon_s));
  }
  if (spec.kind == AttackKind::Neighbour) {
    if (!spec.source) throw ConfigError(where + ": neighbour attacks need a source agent");
    if (*spec.source < 0 || *spec.source >= g.size()) {
      throw ConfigError(where + ": source agent does not exist");
    }
    if (!g.has_edge(*spec.source, spec.target)) {
      throw ConfigError(where + fmt::format(": no edge {} -> {}", *spec.source + 1,
                                            spec.target + 1));
    }
  } else if (spec.source) {
    throw ConfigError(where + ": only neighbour attacks take a source agent");
  }
}

Vec apply_actuator(const Vec& u, const AttackSpec& spec, double t) {
  if (!spec.active(t)) return u;
  return u + spec.signal(t);
}

Vec apply_sensor(const Vec& x, const AttackSpec& spec, double t) {
  if (!spec.active(t)) return x;
  return x + spec.signal(t);
}

Vec apply_neighbour(const Vec& x_bar, const AttackSpec& spec, double t) {
  if (!spec.active(t)) return x_bar;
  return x_bar + spec.signal(t);
}

std::vector<AgentAttackInputs> attack_inputs(const std::vector<AttackSpec>& attacks,
                                             int n_agents, int state_dim, double t) {
  std::vector<AgentAttackInputs> out(n_agents);
  for (auto& in : out) {
    in.actuator = Vec::Zero(state_dim);
    in.sensor = Vec::Zero(state_dim);
    in.neighbour.assign(n_agents, Vec::Zero(state_dim));
  }
  for (const auto& a : attacks) {
    if (!a.active(t)) continue;
    auto& in = out.at(a.target);
    switch (a.kind) {
      case AttackKind::Actuator:
        in.actuator = apply_actuator(in.actuator, a, t);
        in.actuator_active = true;
        break;
      case AttackKind::Sensor:
        in.sensor = apply_sensor(in.sensor, a, t);
        in.sensor_active = true;
        break;
      case AttackKind::Neighbour:
        in.neighbour.at(*a.source) = apply_neighbour(in.neighbour.at(*a.source), a, t);
        in.neighbour_active = true;
        break;
    }
  }
  return out;
}

ChannelView make_channel_view(const std::vector<Vec>& states,
                              const std::vector<AgentAttackInputs>& inputs) {
  const auto n = states.size();
  require_dim(static_cast<long>(inputs.size()), static_cast<long>(n), "attack inputs");
  ChannelView v;
  v.sensed.reserve(n);
  v.received.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.sensed.push_back(states[i] + inputs[i].sensor);
    v.received[i].reserve(n);
    // Outgoing messages carry the sender's true state; only the attacked edge differs.
    for (std::size_t j = 0; j < n; ++j) v.received[i].push_back(states[j] + inputs[i].neighbour[j]);
  }
  return v;
}

}  // namespace formguard
