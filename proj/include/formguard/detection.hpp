#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "formguard/attack.hpp"
#include "formguard/linalg.hpp"

namespace formguard {

/// Inclusive step range [start, end].
struct AlarmInterval {
  long start = 0;
  long end = 0;
  bool operator==(const AlarmInterval&) const = default;
};

struct AttackLatency {
  std::string attack_id;
  int agent = 0;
  long window_start_step = 0;
  long window_end_step = 0;
  std::optional<long> first_alarm_step;
  std::optional<long> latency_steps;
};

struct DetectionReport {
  double threshold = 0.0;
  long arm_step = 0;                        // alarms are suppressed before this step
  std::vector<std::vector<double>> norms;   // [step][agent] |x̃_i|_∞
  std::vector<std::vector<AlarmInterval>> intervals;  // per agent
  std::vector<AttackLatency> latencies;

  int agents() const { return static_cast<int>(intervals.size()); }
  long steps() const { return static_cast<long>(norms.size()); }
  bool alarm(long step, int agent) const;
  bool empty() const;
};

/// Per-agent alarm iff |x̃_i|_∞ >= π (inclusive), for steps >= arm_step.
/// Contiguous alarm steps are merged into intervals.
DetectionReport detect(const std::vector<std::vector<double>>& residual_inf_norms, double pi,
                       long arm_step = 0);

DetectionReport detect(const std::vector<std::vector<Vec>>& residuals, double pi,
                       long arm_step = 0);

/// Fills report.latencies from the attack windows (ground truth). The agent
/// expected to alarm is the attack target.
void annotate_latencies(DetectionReport& report, const std::vector<AttackSpec>& attacks,
                        double sample_period);

/// Σ_{l<k} G^{k-l-1} v(l), accumulated one step at a time.
class ResponseAccumulator {
 public:
  explicit ResponseAccumulator(Mat gain) : gain_(std::move(gain)), acc_(Vec::Zero(gain_.rows())) {}
  void push(const Vec& v) { acc_ = gain_ * acc_ + v; }
  const Vec& value() const { return acc_; }

 private:
  Mat gain_;
  Vec acc_;
};

struct Detectability {
  bool detectable = false;
  double margin = 0.0;           // |Σ G^{k-l-1} s| - π - |Σ G^{k-l-1} nuisance|
  double attack_response = 0.0;  // |Σ G^{k-l-1} s|
  double nuisance_response = 0.0;
};

/// Margin from already accumulated responses.
Detectability detectability_margin(const Vec& attack_response, const Vec& nuisance_response,
                                   double pi);

/// Sufficient detectability test over the first k samples:
///   |Σ_{l<k} G^{k-l-1} s(l)| >= π + |Σ_{l<k} G^{k-l-1} nuisance(l)|.
Detectability detectability_check(std::span<const Vec> attack_effect, const Mat& observer_gain,
                                  std::span<const Vec> nuisance, double pi, long k);

}  // namespace formguard
