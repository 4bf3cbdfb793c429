#include "formguard/commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "formguard/detection.hpp"
#include "formguard/errors.hpp"
#include "formguard/observer.hpp"
#include "formguard/report_io.hpp"
#include "formguard/simulation.hpp"

namespace fs = std::filesystem;

namespace formguard {

namespace {

std::string num(double v) { return fmt::format("{}", v); }

long seconds_to_step(double s, double T) { return static_cast<long>(std::ceil(s / T - 1e-9)); }

std::string condition_line(const GainCondition& c) {
  const auto lower = std::isinf(c.lower) ? std::string("-inf") : fmt::format("{:.6g}", c.lower);
  auto line = fmt::format("condition {} {}: {:.6g} in ({}, {:.6g})  margin {:.6g}  {}", c.id, c.label,
                          c.value, lower, c.upper, c.margin, c.passed ? "PASS" : "FAIL");
  if (!c.detail.empty()) line += "  [" + c.detail + "]";
  return line;
}

void append_gain_keys(KeyValues& kv, const GainReport& r) {
  kv.emplace_back("phi_M", num(r.phi_bound));
  kv.emplace_back("eta", num(r.eta));
  kv.emplace_back("sigma_max_PtP", num(r.sigma_max_PtP));
  for (const auto& c : r.conditions) {
    const auto id = c.id.substr(1, c.id.size() - 2);
    kv.emplace_back(fmt::format("condition_{}_value", id), num(c.value));
    kv.emplace_back(fmt::format("condition_{}_lower", id), num(c.lower));
    kv.emplace_back(fmt::format("condition_{}_upper", id), num(c.upper));
    kv.emplace_back(fmt::format("condition_{}_margin", id), num(c.margin));
    kv.emplace_back(fmt::format("condition_{}_passed", id), c.passed ? "true" : "false");
  }
  kv.emplace_back("all_passed", r.all_passed() ? "true" : "false");
}

/// Returns false when the run must stop; with --force failures become warnings.
bool gain_gate(const GainReport& r, bool force, std::ostream& err) {
  bool ok = true;
  for (const auto& c : r.conditions) {
    if (c.passed) continue;
    err << (force ? "warning: " : "error: ")
        << fmt::format("condition {} violated: {} = {:.6g}, required in ({:.6g}, {:.6g})\n", c.id,
                       c.label, c.value, c.lower, c.upper);
    ok = false;
  }
  if (!ok && force) err << "warning: continuing because of --force\n";
  return ok || force;
}

std::string resolve_path(const std::string& p, const std::string& scenario_path) {
  const fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(scenario_path).parent_path() / path).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

std::string out_path(const CommandOptions& o, const std::string& name) {
  return (fs::path(o.output_dir) / name).string();
}

/// Runs `body`, mapping library exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace

Scenario load_for_command(const std::string& path, const CommandOptions& opts) {
  Scenario s = load_scenario(path);
  if (opts.horizon_override) {
    if (*opts.horizon_override < 1) throw ConfigError("--horizon-override must be at least 1");
    s.horizon_steps = *opts.horizon_override;
    const double end = s.horizon_s();
    std::vector<AttackSpec> kept;
    for (auto a : s.attacks) {
      if (a.start_s > end) continue;
      a.end_s = std::min(a.end_s, end);
      kept.push_back(std::move(a));
    }
    s.attacks = std::move(kept);
    s.validate();
  }
  return s;
}

ResolvedBounds resolve_bounds(const Scenario& s, const std::string& scenario_path) {
  ResolvedBounds r;
  if (s.detection.bounds == "calibrate") {
    r.calibration = calibrate(s.without_attacks());
    r.bounds = r.calibration->bounds;
    r.source = "calibrate";
  } else {
    r.source = resolve_path(s.detection.bounds, scenario_path);
    r.bounds = load_bound_set(r.source);
  }
  if (!r.bounds.reference_pi) r.bounds.reference_pi = s.detection.reference_pi;
  return r;
}

int cmd_simulate(const std::string& path, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = load_for_command(path, opts);
    const Simulator sim(s);

    // Cheapest necessary check first (φ_M = 0 gives the loosest bounds), so that
    // hopeless gains are reported before any calibration run can blow up.
    const auto loose = validate_gains(s.gains, sim.laplacian(), s.tuning, 0.0);
    if (!gain_gate(loose, opts.force, err)) return int(kExitInvalid);

    const auto rb = resolve_bounds(s, path);
    const auto report = validate_gains(s.gains, sim.laplacian(), s.tuning, rb.bounds.phi_M);
    if (loose.all_passed() && !gain_gate(report, opts.force, err)) return int(kExitInvalid);

    ensure_dir(opts.output_dir);
    TraceWriter trace(out_path(opts, "trace.csv"), s);
    const auto run = sim.run(-1, [&](const TraceRecord& r) { trace.write(r); });
    trace.close();

    const double T = s.sample_period;
    const long arm_step = seconds_to_step(s.detection.arm_after_s, T);
    auto det = detect(run.residual_norms, rb.bounds.pi, arm_step);
    annotate_latencies(det, s.attacks, T);
    write_detection_csv(out_path(opts, "detection.csv"), det, T);
    write_residual_files(opts.output_dir, det, T);
    save_bound_set(rb.bounds, out_path(opts, "bounds.txt"));

    const long transient = std::min(seconds_to_step(s.detection.transient_s, T), run.steps - 1);
    double e_max_after = 0.0, weight_max = 0.0;
    for (long k = 0; k < run.steps; ++k) {
      const auto& st = run.stats[static_cast<std::size_t>(k)];
      if (k >= transient) e_max_after = std::max(e_max_after, st.e_norm);
      weight_max = std::max(weight_max, st.weight_norm);
    }

    KeyValues kv;
    kv.emplace_back("scenario", s.name);
    kv.emplace_back("steps", std::to_string(run.steps));
    kv.emplace_back("sample_period_s", num(T));
    kv.emplace_back("horizon_s", num(s.horizon_s()));
    kv.emplace_back("bounds_source", rb.source);
    kv.emplace_back("pi", num(rb.bounds.pi));
    kv.emplace_back("reference_pi", rb.bounds.reference_pi ? num(*rb.bounds.reference_pi) : "none");
    if (rb.bounds.reference_pi) kv.emplace_back("pi_minus_reference", num(rb.bounds.pi - *rb.bounds.reference_pi));
    kv.emplace_back("e_M", num(rb.bounds.e_M));
    kv.emplace_back("phi_M", num(rb.bounds.phi_M));
    kv.emplace_back("gains_all_passed", report.all_passed() ? "true" : "false");
    kv.emplace_back("forced", opts.force ? "true" : "false");
    kv.emplace_back("arm_after_s", num(s.detection.arm_after_s));
    kv.emplace_back("transient_s", num(s.detection.transient_s));
    kv.emplace_back("e_norm_initial", num(run.stats.front().e_norm));
    kv.emplace_back("e_norm_final", num(run.stats.back().e_norm));
    kv.emplace_back("e_norm_max_after_transient", num(e_max_after));
    kv.emplace_back("weight_norm_max", num(weight_max));
    for (int i = 0; i < s.n_agents(); ++i) {
      double res_max = 0.0;
      long alarm_steps = 0;
      for (long k = arm_step; k < run.steps; ++k) res_max = std::max(res_max, run.residual_norms[k][i]);
      for (const auto& iv : det.intervals[i]) alarm_steps += iv.end - iv.start + 1;
      kv.emplace_back(fmt::format("residual_max_agent{}", i + 1), num(res_max));
      kv.emplace_back(fmt::format("alarm_steps_agent{}", i + 1), std::to_string(alarm_steps));
      kv.emplace_back(fmt::format("alarms_agent{}", i + 1), format_intervals(det.intervals[i], T));
    }
    for (const auto& l : det.latencies) {
      const auto key = "attack_" + l.attack_id;
      kv.emplace_back(key + "_agent", std::to_string(l.agent + 1));
      kv.emplace_back(key + "_window_s", fmt::format("{}-{}", num(l.window_start_step * T), num(l.window_end_step * T)));
      kv.emplace_back(key + "_first_alarm_s", l.first_alarm_step ? num(*l.first_alarm_step * T) : "none");
      kv.emplace_back(key + "_latency_s", l.latency_steps ? num(*l.latency_steps * T) : "none");
    }
    const auto text = format_key_values(kv);
    write_text(out_path(opts, "summary.txt"), text);
    out << text;
    return int(kExitOk);
  });
}

int cmd_validate_gains(const std::string& path, const CommandOptions& opts, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = load_for_command(path, opts);
    const Simulator sim(s);
    double phi = sim.basis().activation_bound();
    std::string phi_source = "worst case sqrt(neurons)";
    if (opts.phi_bound) {
      phi = *opts.phi_bound;
      phi_source = "command line";
    } else if (!opts.worst_case_activation) {
      if (s.detection.bounds != "calibrate") {
        phi = load_bound_set(resolve_path(s.detection.bounds, path)).phi_M;
        phi_source = "bound set file";
      } else {
        try {
          phi = calibrate(s.without_attacks()).bounds.phi_M;
          phi_source = "calibrated";
        } catch (const DivergenceError& e) {
          err << "note: calibration run diverged (" << e.what() << "); using the worst-case bound\n";
        }
      }
    }
    const auto report = validate_gains(s.gains, sim.laplacian(), s.tuning, phi);
    out << fmt::format("activation bound phi_M = {:.6g} ({}), eta = {:.6g}\n", phi, phi_source, report.eta);
    for (const auto& c : report.conditions) out << condition_line(c) << '\n';
    if (const auto* f = report.first_failure()) out << "first violated: condition " << f->id << '\n';
    out << "\n# key-value\n";
    KeyValues kv;
    kv.emplace_back("phi_source", phi_source);
    append_gain_keys(kv, report);
    out << format_key_values(kv);
    return int(report.all_passed() ? kExitOk : kExitInvalid);
  });
}

int cmd_calibrate(const std::string& path, const std::optional<std::string>& output,
                  const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = load_for_command(path, opts);
    if (!s.attacks.empty()) {
      throw RefusalError(fmt::format("calibration needs an attack-free scenario; {} declares {} attack(s)",
                                     path, s.attacks.size()));
    }
    const Simulator sim(s);
    const auto loose = validate_gains(s.gains, sim.laplacian(), s.tuning, 0.0);
    if (!gain_gate(loose, opts.force, err)) return int(kExitInvalid);

    const auto cal = calibrate_from_run(sim, sim.run());
    if (!cal.gains.all_passed()) gain_gate(cal.gains, true, err);

    std::string target;
    if (output) {
      target = *output;
    } else {
      ensure_dir(opts.output_dir);
      target = out_path(opts, "bounds.txt");
    }
    save_bound_set(cal.bounds, target);

    const auto& b = cal.bounds;
    out << format_bound_set(b);
    double res_max = 0.0;
    for (double r : cal.residual_max) res_max = std::max(res_max, r);
    out << fmt::format("residual_max_after_transient = {}\n", num(res_max));
    out << fmt::format("summary: pi = {:.6g}, reference_pi = {}, observed residual max = {:.6g}\n", b.pi,
                       b.reference_pi ? fmt::format("{:.6g}", *b.reference_pi) : "none", res_max);
    out << "wrote " << target << '\n';
    return int(kExitOk);
  });
}

int cmd_detectability(const std::string& path, const std::string& attack_id,
                      const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = load_for_command(path, opts);
    const AttackSpec* attack = s.find_attack(attack_id);
    if (!attack) throw ConfigError(fmt::format("scenario has no attack with id '{}'", attack_id));
    const Simulator sim(s);
    const auto rb = resolve_bounds(s, path);
    const double pi = rb.bounds.pi;
    const double T = s.sample_period;
    const int i = attack->target;
    const Mat G = sim.scenario().gains.observer[i].asDiagonal();
    const long first = seconds_to_step(attack->start_s, T);
    const long last = static_cast<long>(std::floor(attack->end_s / T + 1e-9));
    const long every = std::max(1L, opts.report_every);

    ResponseAccumulator s_acc(G), n_acc(G);
    std::optional<long> first_detectable;
    long detectable_steps = 0, window_steps = 0;
    double best_margin = -std::numeric_limits<double>::infinity();

    std::FILE* csv = nullptr;
    if (opts.output_dir != ".") ensure_dir(opts.output_dir);
    const auto csv_path = out_path(opts, fmt::format("detectability_{}.csv", attack_id));
    csv = std::fopen(csv_path.c_str(), "wb");
    if (!csv) throw ConfigError("cannot write " + csv_path);
    std::fputs("step,t,attack_response,nuisance_response,pi,margin,detectable\n", csv);

    out << fmt::format("attack '{}' ({} on agent {}), window {}-{} s, pi = {:.6g}\n", attack->id,
                       to_string(attack->kind), i + 1, num(attack->start_s), num(attack->end_s), pi);
    out << "t_s attack_response nuisance_response margin detectable\n";

    const auto& basis = sim.basis();
    const auto& g = s.graph;
    const auto on_step = [&](const StepDiagnostics& d) {
      const long k = d.record.step;
      if (k < first || k > last) return;
      const Vec& x = d.record.x[i];
      const Vec s_i = attack_effect_s(i, d.attacks[i], x, basis, d.weights[i], g, s.gains.observer[i]);
      const Vec f_hat_true = estimate(basis, d.weights[i], x);
      const Vec nuisance = d.x_next[i] - d.record.u_applied[i] - f_hat_true + d.record.e_true[i];
      s_acc.push(s_i);
      n_acc.push(nuisance);
      const auto m = detectability_margin(s_acc.value(), n_acc.value(), pi);
      ++window_steps;
      if (m.detectable) {
        ++detectable_steps;
        if (!first_detectable) first_detectable = k;
      }
      best_margin = std::max(best_margin, m.margin);
      std::fputs(fmt::format("{},{},{},{},{},{},{}\n", k, d.record.t, m.attack_response, m.nuisance_response,
                             pi, m.margin, m.detectable ? 1 : 0).c_str(), csv);
      if ((k - first) % every == 0 || k == last) {
        out << fmt::format("{:.3f} {:.6g} {:.6g} {:.6g} {}\n", d.record.t, m.attack_response,
                           m.nuisance_response, m.margin, m.detectable ? "yes" : "no");
      }
    };
    try {
      sim.run(std::min(s.horizon_steps, last + 1), {}, on_step);
    } catch (...) {
      std::fclose(csv);
      throw;
    }
    std::fclose(csv);

    KeyValues kv;
    kv.emplace_back("attack", attack->id);
    kv.emplace_back("agent", std::to_string(i + 1));
    kv.emplace_back("pi", num(pi));
    kv.emplace_back("window_steps", std::to_string(window_steps));
    kv.emplace_back("detectable_steps", std::to_string(detectable_steps));
    kv.emplace_back("first_detectable_s", first_detectable ? num(*first_detectable * T) : "none");
    kv.emplace_back("best_margin", num(best_margin));
    kv.emplace_back("detectable", detectable_steps > 0 ? "true" : "false");
    out << '\n' << format_key_values(kv);
    return int(kExitOk);
  });
}

}  // namespace formguard
