#pragma once

#include <functional>
#include <vector>

#include "formguard/attack.hpp"
#include "formguard/dynamics.hpp"
#include "formguard/graph.hpp"
#include "formguard/rbf.hpp"
#include "formguard/scenario.hpp"

namespace formguard {

/// One trace row. Everything is at time t = step·T, before the update to step+1.
struct TraceRecord {
  long step = 0;
  double t = 0.0;
  Vec leader;
  std::vector<Vec> x;          // true plant state
  std::vector<Vec> x_hat;      // observer estimate
  std::vector<Vec> u;          // commanded input
  std::vector<Vec> u_applied;  // after actuator corruption
  std::vector<Vec> e;          // local error as the controller computed it
  std::vector<Vec> e_true;     // local error from true states
  std::vector<Vec> residual;   // x - x̂
  std::vector<double> weight_norm;  // |Ŵ_i|_F
  std::vector<bool> attack_active;  // per scenario attack, in declaration order
};

/// Extra per-step internals for oracles. References are valid only during the callback.
struct StepDiagnostics {
  const TraceRecord& record;
  const ChannelView& view;
  const std::vector<AgentAttackInputs>& attacks;
  const std::vector<WeightMatrix>& weights;  // Ŵ used at this step (before tuning)
  const std::vector<Vec>& disturbance;       // w(t)
  const std::vector<Vec>& f_hat;             // f̂ at the sensed state
  const std::vector<Vec>& hbar;              // tuning signal
  const std::vector<Vec>& x_next;            // true x(t+1)
  const std::vector<Vec>& x_hat_next;
  const Vec& leader_next;
};

/// Per-step scalars kept for calibration and acceptance checks.
struct StepStats {
  double e_norm = 0.0;          // |e| from true states, stacked
  double delta_norm = 0.0;      // |δ|, stacked tracking error
  double w_norm = 0.0;          // |w(t)|, stacked
  double model_error_norm = 0.0;  // |h̄ - w|, stacked
  double weight_norm = 0.0;     // |Ŵ|_F over all agents
  double phi_max = 0.0;         // max_i |φ(x^c_i)|
  double leader_next_norm = 0.0;
};

struct RunResult {
  long steps = 0;
  std::vector<std::vector<double>> residual_norms;  // [step][agent] |x̃_i|_∞
  std::vector<StepStats> stats;
  std::vector<Vec> final_state;
  std::vector<WeightMatrix> final_weights;
};

class Simulator {
 public:
  using RecordSink = std::function<void(const TraceRecord&)>;
  using DiagnosticsSink = std::function<void(const StepDiagnostics&)>;

  /// Throws ConfigError on an invalid scenario or topology.
  explicit Simulator(const Scenario& scenario);

  const Scenario& scenario() const { return scenario_; }
  const LaplacianBundle& laplacian() const { return bundle_; }
  const RbfBasis& basis() const { return basis_; }

  /// Runs `steps` steps (the scenario horizon if negative). Throws DivergenceError
  /// when a state becomes non-finite or exceeds the divergence limit.
  RunResult run(long steps = -1, const RecordSink& on_record = {},
                const DiagnosticsSink& on_step = {}) const;

 private:
  Scenario scenario_;
  LaplacianBundle bundle_;
  RbfBasis basis_;
  std::vector<AgentDynamics> dynamics_;
};

}  // namespace formguard
