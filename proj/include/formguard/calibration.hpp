#pragma once

#include <vector>

#include "formguard/bounds.hpp"
#include "formguard/simulation.hpp"

namespace formguard {

struct CalibrationResult {
  BoundSet bounds;
  GainReport gains;                   // conditions evaluated at the calibrated φ_M
  std::vector<double> residual_max;   // per agent, after the transient
  double e_norm_initial = 0.0;
  double e_norm_max_after_transient = 0.0;
  long transient_steps = 0;
};

/// Bound constants from one attack-free run, each an empirical maximum scaled by
/// the scenario's safety factor:
///   w_M    max |w(t)| over the horizon
///   eps_M  max |h̄ - w| after the transient
///   W_M    max |Ŵ|_F after the transient
///   phi_M  max |φ(x_i)| over the run, capped at √ϑ
///   F_M    max |x_l(t+T)|;  d_M the declared offset bound or |d|
///   e_M    max |e| after the transient ("observed"), or the closed-form bound ("formula")
/// Throws RefusalError when the scenario declares attacks.
CalibrationResult calibrate(const Scenario& scenario, long steps = -1);

/// Calibrates from a finished attack-free run (shared by calibrate() and tests).
CalibrationResult calibrate_from_run(const Simulator& sim, const RunResult& run);

}  // namespace formguard
