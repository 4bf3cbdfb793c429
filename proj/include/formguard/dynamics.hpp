#pragma once

#include <functional>
#include <string>
#include <vector>

#include "formguard/linalg.hpp"

namespace formguard {

/// Parameters of a registered agent model.
struct DynamicsConfig {
  std::string model = "paper_ex1";
  std::vector<double> matrix;  // row-major n×n, used by `linear`

  bool operator==(const DynamicsConfig&) const = default;
};

/// x⁺ = f(x) + u + w for one agent.
class AgentDynamics {
 public:
  using Drift = std::function<Vec(const Vec&)>;
  AgentDynamics(std::string name, int state_dim, Drift drift)
      : name_(std::move(name)), dim_(state_dim), drift_(std::move(drift)) {}

  const std::string& name() const { return name_; }
  int state_dim() const { return dim_; }
  Vec drift(const Vec& x) const { return drift_(x); }
  Vec step(const Vec& x, const Vec& u, const Vec& w) const;

 private:
  std::string name_;
  int dim_;
  Drift drift_;
};

/// Built-ins:
///   paper_ex1  n = 2, f(x) = [x2/(1+x2²), x1/(1+x2²)]
///   linear     f(x) = A x, A given row-major
///   zero       f(x) = 0
/// Throws ConfigError for unknown names or bad parameters.
AgentDynamics make_dynamics(const DynamicsConfig& cfg, int state_dim);

std::vector<std::string> registered_dynamics();

}  // namespace formguard
