#include "formguard/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "formguard/errors.hpp"

namespace formguard {

CalibrationResult calibrate(const Scenario& scenario, long steps) {
  if (!scenario.attacks.empty()) {
    throw RefusalError("calibration needs an attack-free scenario; this one declares " +
                       std::to_string(scenario.attacks.size()) + " attack(s)");
  }
  const Simulator sim(scenario);
  return calibrate_from_run(sim, sim.run(steps));
}

CalibrationResult calibrate_from_run(const Simulator& sim, const RunResult& run) {
  const auto& sc = sim.scenario();
  const auto& det = sc.detection;
  const double sf = det.safety_factor;
  const int N = sc.n_agents();

  CalibrationResult out;
  out.transient_steps = static_cast<long>(std::ceil(det.transient_s / sc.sample_period - 1e-9));
  // Short runs (tests, --horizon-override) fall back to the whole run.
  const long from = out.transient_steps < run.steps ? out.transient_steps : 0;

  double w_max = 0.0, eps_max = 0.0, weight_max = 0.0, phi_max = 0.0, leader_max = 0.0, e_max = 0.0;
  out.residual_max.assign(static_cast<std::size_t>(N), 0.0);
  for (long k = 0; k < run.steps; ++k) {
    const auto& st = run.stats[static_cast<std::size_t>(k)];
    w_max = std::max(w_max, st.w_norm);
    phi_max = std::max(phi_max, st.phi_max);
    leader_max = std::max(leader_max, st.leader_next_norm);
    if (k < from) continue;
    eps_max = std::max(eps_max, st.model_error_norm);
    weight_max = std::max(weight_max, st.weight_norm);
    e_max = std::max(e_max, st.e_norm);
    for (int i = 0; i < N; ++i) {
      out.residual_max[i] = std::max(out.residual_max[i], run.residual_norms[k][i]);
    }
  }
  if (run.steps > 0) out.e_norm_initial = run.stats.front().e_norm;
  out.e_norm_max_after_transient = e_max;

  BoundSet& b = out.bounds;
  b.safety_factor = sf;
  b.w_M = sf * w_max;
  b.eps_M = sf * eps_max;
  b.W_M = sf * weight_max;
  b.phi_M = std::min(sim.basis().activation_bound(), sf * phi_max);
  b.F_M = sf * leader_max;
  b.d_M = sc.formation.bound();
  b.refresh_sums();
  b.alpha = sc.tuning.alpha;
  b.gamma = sc.tuning.gamma;
  b.c = sc.gains.c;

  out.gains = validate_gains(sc.gains, sim.laplacian(), sc.tuning, b.phi_M);
  b.eta = out.gains.eta;
  const auto spectra = gain_spectra(sc.gains, sim.laplacian());
  b.sigma_G = spectra.sigma_G;
  b.sigma_P = spectra.sigma_P;
  b.sigma_Lbar = spectra.sigma_Lbar;
  b.sigma_min_LB = sim.laplacian().sigma_min_LB;

  // The closed-form bound needs (29); without it only the observed bound exists.
  if (det.e_M_source == "formula" || out.gains.all_passed()) {
    const auto fb = compute_e_M(b, sim.laplacian(), sc.gains, sc.tuning);
    b.Lambda1 = fb.Lambda1;
    b.Lambda2 = fb.Lambda2;
    b.xi = fb.xi;
    b.W_tilde_M = fb.W_tilde_M;
    b.e_M_formula = fb.e_M;
  } else {
    b.e_M_formula = std::numeric_limits<double>::quiet_NaN();
  }
  b.e_M_source = det.e_M_source;
  b.e_M = det.e_M_source == "formula" ? b.e_M_formula : sf * e_max;

  const auto th = compute_threshold_pi(b, sc.gains, sc.tuning);
  b.rho1 = th.rho1;
  b.rho2 = th.rho2;
  b.pi = th.pi;
  b.reference_pi = det.reference_pi;
  return out;
}

}  // namespace formguard
