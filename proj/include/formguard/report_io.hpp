#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "formguard/bounds.hpp"
#include "formguard/detection.hpp"
#include "formguard/simulation.hpp"

namespace formguard {

/// Column order of trace.csv:
///   step, t, leader_1..n,
///   then for each agent i: x_i_1..n, xhat_i_1..n, u_i_1..n, uapp_i_1..n,
///   e_i_1..n, etrue_i_1..n, res_i_1..n, resinf_i, wnorm_i,
///   then attack_<id> (0/1) per declared attack.
std::vector<std::string> trace_columns(const Scenario& s);

/// Streams trace rows to a file; numbers use the shortest round-trip form.
class TraceWriter {
 public:
  TraceWriter(const std::string& path, const Scenario& s);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write(const TraceRecord& r);
  void close();

 private:
  std::FILE* f_ = nullptr;
  std::string buf_;
};

/// step, t, agent, residual_inf_norm, alarm
void write_detection_csv(const std::string& path, const DetectionReport& report, double sample_period);
/// residual_agent<i>.csv: step, t, norm, threshold
void write_residual_files(const std::string& dir, const DetectionReport& report, double sample_period);

using KeyValues = std::vector<std::pair<std::string, std::string>>;
std::string format_key_values(const KeyValues& kv);
void write_text(const std::string& path, const std::string& text);

/// Alarm intervals as "start-end" seconds, comma separated; "none" if empty.
std::string format_intervals(const std::vector<AlarmInterval>& intervals, double sample_period);

}  // namespace formguard
