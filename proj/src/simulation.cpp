#include "formguard/simulation.hpp"

#include <fmt/format.h>

#include <cmath>

#include "formguard/errors.hpp"
#include "formguard/formation.hpp"
#include "formguard/observer.hpp"

namespace formguard {

Simulator::Simulator(const Scenario& scenario)
    : scenario_(scenario),
      bundle_(build_laplacian(scenario.graph, scenario.state_dim)),
      basis_(scenario.basis.build()) {
  scenario_.validate();
  for (const auto& a : scenario_.agents) {
    dynamics_.push_back(make_dynamics(a.dynamics.value_or(scenario_.dynamics), scenario_.state_dim));
  }
}

namespace {

void check_finite(const Vec& x, double limit, long step, int agent) {
  const bool bad = !x.allFinite() || x.cwiseAbs().maxCoeff() > limit;
  if (bad) {
    throw DivergenceError(fmt::format("state of agent {} diverged at step {} (|x|inf = {})",
                                      agent + 1, step, x.cwiseAbs().maxCoeff()),
                          step, agent);
  }
}

}  // namespace

RunResult Simulator::run(long steps, const RecordSink& on_record, const DiagnosticsSink& on_step) const {
  const auto& sc = scenario_;
  const int N = sc.n_agents();
  const int n = sc.state_dim;
  const double T = sc.sample_period;
  if (steps < 0) steps = sc.horizon_steps;

  std::vector<Vec> x(N), x_hat(N);
  std::vector<WeightMatrix> W(N, WeightMatrix::Zero(basis_.neurons(), n));
  for (int i = 0; i < N; ++i) {
    x[i] = sc.agents[i].initial_state;
    x_hat[i] = x[i];
  }

  RunResult result;
  result.steps = steps;
  result.residual_norms.reserve(static_cast<std::size_t>(steps));
  result.stats.reserve(static_cast<std::size_t>(steps));

  TraceRecord rec;
  rec.x_hat.resize(N);
  rec.u.resize(N);
  rec.u_applied.resize(N);
  rec.e.resize(N);
  rec.e_true.resize(N);
  rec.residual.resize(N);
  rec.weight_norm.resize(N);
  rec.attack_active.resize(sc.attacks.size());

  std::vector<Vec> w(N), f_hat(N), phi(N), hbar(N), x_next(N), x_hat_next(N);

  for (long k = 0; k < steps; ++k) {
    // (1) exogenous signals at t
    const double t = static_cast<double>(k) * T;
    const double t_next = static_cast<double>(k + 1) * T;
    const Vec leader = sc.leader(t);
    for (int i = 0; i < N; ++i) w[i] = sc.agents[i].disturbance(t);
    const auto inputs = attack_inputs(sc.attacks, N, n, t);

    // (2) what each controller sees
    const ChannelView view = make_channel_view(x, inputs);

    StepStats st;
    for (int i = 0; i < N; ++i) {
      // (3) error and control from the corrupted view
      rec.e[i] = local_error(i, view.sensed[i], view.received[i], leader, sc.graph, sc.formation);
      rec.e_true[i] = local_error(i, x, leader, sc.graph, sc.formation);
      phi[i] = activation(basis_, view.sensed[i]);
      f_hat[i] = W[i].transpose() * phi[i];
      rec.u[i] = control_law(i, view.sensed[i], rec.e[i], f_hat[i], sc.gains);
      // (4) actuator corruption
      rec.u_applied[i] = rec.u[i] + inputs[i].actuator;
      st.phi_max = std::max(st.phi_max, phi[i].norm());
    }

    for (int i = 0; i < N; ++i) {
      // (5) true plant
      x_next[i] = dynamics_[i].step(x[i], rec.u_applied[i], w[i]);
      check_finite(x_next[i], sc.divergence_limit, k + 1, i);
      // (6) observer, driven by what the agent measured
      x_hat_next[i] = observer_step(view.sensed[i], x_hat[i], rec.u[i], rec.e[i], f_hat[i],
                                    sc.gains.observer[i]);
      check_finite(x_hat_next[i], sc.divergence_limit, k + 1, i);
    }

    // (7) weight tuning from the next measurement the agent will take
    const auto inputs_next = attack_inputs(sc.attacks, N, n, t_next);
    double model_err2 = 0.0, weight2 = 0.0, w2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const Vec sensed_next = x_next[i] + inputs_next[i].sensor;
      hbar[i] = prediction_error(sensed_next, rec.u[i], f_hat[i]);
      model_err2 += (hbar[i] - w[i]).squaredNorm();
      w2 += w[i].squaredNorm();
    }

    // (8) record
    rec.step = k;
    rec.t = t;
    rec.leader = leader;
    rec.x = x;
    for (int i = 0; i < N; ++i) {
      rec.x_hat[i] = x_hat[i];
      rec.residual[i] = x[i] - x_hat[i];
      rec.weight_norm[i] = W[i].norm();
      weight2 += W[i].squaredNorm();
    }
    for (std::size_t q = 0; q < sc.attacks.size(); ++q) rec.attack_active[q] = sc.attacks[q].active(t);

    std::vector<double> norms(N);
    for (int i = 0; i < N; ++i) norms[i] = rec.residual[i].lpNorm<Eigen::Infinity>();
    result.residual_norms.push_back(std::move(norms));

    st.e_norm = stack(rec.e_true).norm();
    st.delta_norm = tracking_error(x, leader, sc.formation).norm();
    st.w_norm = std::sqrt(w2);
    st.model_error_norm = std::sqrt(model_err2);
    st.weight_norm = std::sqrt(weight2);
    const Vec leader_next = sc.leader(t_next);
    st.leader_next_norm = leader_next.norm();
    result.stats.push_back(st);

    if (on_record) on_record(rec);
    if (on_step) {
      on_step(StepDiagnostics{rec, view, inputs, W, w, f_hat, hbar, x_next, x_hat_next, leader_next});
    }

    for (int i = 0; i < N; ++i) {
      W[i] = tune_weights(W[i], phi[i], hbar[i], sc.tuning);
      x[i] = x_next[i];
      x_hat[i] = x_hat_next[i];
    }
  }

  result.final_state = x;
  result.final_weights = W;
  return result;
}

}  // namespace formguard
