#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formguard/attack.hpp"
#include "formguard/dynamics.hpp"
#include "formguard/expression.hpp"
#include "formguard/formation.hpp"
#include "formguard/graph.hpp"
#include "formguard/rbf.hpp"

namespace formguard {

inline constexpr int kSchemaVersion = 1;

struct AgentConfig {
  Vec initial_state;
  VectorSignal disturbance;
  std::optional<DynamicsConfig> dynamics;  // overrides the scenario default

  bool operator==(const AgentConfig&) const = default;
};

struct DetectionConfig {
  /// "calibrate", or a bound-set file path (relative paths resolve against the scenario file).
  std::string bounds = "calibrate";
  double safety_factor = 1.2;
  double transient_s = 10.0;  // calibration ignores formation/prediction errors before this
  double arm_after_s = 0.0;   // alarms are suppressed before this
  std::string e_M_source = "observed";
  std::optional<double> reference_pi;

  bool operator==(const DetectionConfig&) const = default;
};

struct Scenario {
  std::string name;
  int state_dim = 2;
  double sample_period = 1e-3;  // seconds
  long horizon_steps = 1;
  double divergence_limit = 1e9;

  DirectedWeightedGraph graph{Mat::Zero(1, 1), Vec::Ones(1)};
  DynamicsConfig dynamics;
  std::vector<AgentConfig> agents;
  FormationSpec formation;
  ControlGains gains;
  TuningParams tuning;
  RbfGridLayout basis;
  VectorSignal leader;
  std::vector<AttackSpec> attacks;
  DetectionConfig detection;

  int n_agents() const { return graph.size(); }
  double horizon_s() const { return static_cast<double>(horizon_steps) * sample_period; }
  const AttackSpec* find_attack(const std::string& id) const;
  /// Copy with every attack removed.
  Scenario without_attacks() const;

  /// Cross-field invariants; throws ConfigError.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Strict parser: unknown keys, wrong types, and missing required keys are errors
/// that name the key and the line.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

}  // namespace formguard
