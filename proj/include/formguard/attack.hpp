#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formguard/expression.hpp"
#include "formguard/graph.hpp"

namespace formguard {

enum class AttackKind { Actuator, Sensor, Neighbour };

const char* to_string(AttackKind kind);
AttackKind attack_kind_from_string(const std::string& s);

/// False-data injection on one channel of one follower. Indices are 0-based;
/// for Neighbour attacks `source` names the corrupted in-edge source -> target.
struct AttackSpec {
  std::string id;
  AttackKind kind = AttackKind::Actuator;
  int target = 0;
  std::optional<int> source;
  double start_s = 0.0;
  double end_s = 0.0;
  VectorSignal signal;

  /// Inclusive window test, start_s <= t <= end_s.
  bool active(double t) const { return t >= start_s && t <= end_s; }
  bool operator==(const AttackSpec&) const = default;
};

/// Throws ConfigError on unknown agents, missing edges, or a window outside [0, horizon_s].
void validate_attack(const AttackSpec& spec, const DirectedWeightedGraph& g, int state_dim,
                     double horizon_s);

/// u + κ(t) uᵃ(t).
Vec apply_actuator(const Vec& u, const AttackSpec& spec, double t);
/// x + λ(t) xᵃ(t).
Vec apply_sensor(const Vec& x, const AttackSpec& spec, double t);
/// x̄ + φ(t) x̄ᵃ(t) on the attacked edge only.
Vec apply_neighbour(const Vec& x_bar, const AttackSpec& spec, double t);

/// Injected signals reaching one agent at time t (zero where inactive).
struct AgentAttackInputs {
  Vec actuator;                // κ uᵃ
  Vec sensor;                  // λ xᵃ
  std::vector<Vec> neighbour;  // φʲ x̄ᵃ_j, indexed by source agent j
  bool actuator_active = false;
  bool sensor_active = false;
  bool neighbour_active = false;

  bool any() const { return actuator_active || sensor_active || neighbour_active; }
};

std::vector<AgentAttackInputs> attack_inputs(const std::vector<AttackSpec>& attacks,
                                             int n_agents, int state_dim, double t);

/// What the controller side of every agent observes: its own sensor reading and
/// the neighbour values received on each in-edge. Plant truth is never modified.
struct ChannelView {
  std::vector<Vec> sensed;                 // x^c_i
  std::vector<std::vector<Vec>> received;  // received[i][j] = x̄^c_j as seen by i
};

ChannelView make_channel_view(const std::vector<Vec>& states,
                              const std::vector<AgentAttackInputs>& inputs);

}  // namespace formguard
