#include "formguard/detection.hpp"

#include <cmath>

#include "formguard/errors.hpp"

namespace formguard {

bool DetectionReport::alarm(long step, int agent) const {
  for (const auto& iv : intervals.at(agent)) {
    if (step >= iv.start && step <= iv.end) return true;
  }
  return false;
}

bool DetectionReport::empty() const {
  for (const auto& a : intervals)
    if (!a.empty()) return false;
  return true;
}

DetectionReport detect(const std::vector<std::vector<double>>& norms, double pi, long arm_step) {
  DetectionReport r;
  r.threshold = pi;
  r.arm_step = arm_step;
  r.norms = norms;
  const int agents = norms.empty() ? 0 : static_cast<int>(norms.front().size());
  r.intervals.resize(agents);
  for (long k = std::max(0L, arm_step); k < static_cast<long>(norms.size()); ++k) {
    require_dim(static_cast<long>(norms[k].size()), agents, "residual norms per step");
    for (int i = 0; i < agents; ++i) {
      if (!(norms[k][i] >= pi)) continue;
      auto& iv = r.intervals[i];
      if (!iv.empty() && iv.back().end == k - 1) {
        iv.back().end = k;
      } else {
        iv.push_back({k, k});
      }
    }
  }
  return r;
}

DetectionReport detect(const std::vector<std::vector<Vec>>& residuals, double pi, long arm_step) {
  std::vector<std::vector<double>> norms;
  norms.reserve(residuals.size());
  for (const auto& step : residuals) {
    auto& row = norms.emplace_back();
    for (const auto& r : step) row.push_back(r.size() ? r.cwiseAbs().maxCoeff() : 0.0);
  }
  return detect(norms, pi, arm_step);
}

void annotate_latencies(DetectionReport& report, const std::vector<AttackSpec>& attacks,
                        double sample_period) {
  report.latencies.clear();
  for (const auto& a : attacks) {
    AttackLatency l;
    l.attack_id = a.id;
    l.agent = a.target;
    l.window_start_step = static_cast<long>(std::ceil(a.start_s / sample_period - 1e-9));
    l.window_end_step = static_cast<long>(std::floor(a.end_s / sample_period + 1e-9));
    if (a.target < report.agents()) {
      for (const auto& iv : report.intervals[a.target]) {
        if (iv.end < l.window_start_step || iv.start > l.window_end_step) continue;
        const long first = std::max(iv.start, l.window_start_step);
        if (!l.first_alarm_step || first < *l.first_alarm_step) l.first_alarm_step = first;
      }
    }
    if (l.first_alarm_step) l.latency_steps = *l.first_alarm_step - l.window_start_step;
    report.latencies.push_back(l);
  }
}

Detectability detectability_check(std::span<const Vec> attack_effect, const Mat& observer_gain,
                                  std::span<const Vec> nuisance, double pi, long k) {
  if (k < 0 || static_cast<std::size_t>(k) > attack_effect.size() ||
      static_cast<std::size_t>(k) > nuisance.size()) {
    throw ConfigError("detectability horizon exceeds the supplied sequences");
  }
  ResponseAccumulator s_acc(observer_gain);
  ResponseAccumulator n_acc(observer_gain);
  for (long l = 0; l < k; ++l) {
    s_acc.push(attack_effect[l]);
    n_acc.push(nuisance[l]);
  }
  return detectability_margin(s_acc.value(), n_acc.value(), pi);
}

Detectability detectability_margin(const Vec& attack_response, const Vec& nuisance_response,
                                   double pi) {
  Detectability d;
  d.attack_response = attack_response.norm();
  d.nuisance_response = nuisance_response.norm();
  d.margin = d.attack_response - pi - d.nuisance_response;
  d.detectable = d.margin >= 0.0;
  return d;
}

}  // namespace formguard
