#include "formguard/report_io.hpp"

#include <fmt/format.h>

#include <filesystem>

#include "formguard/errors.hpp"

namespace formguard {

namespace {

std::FILE* open_for_write(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

void append(std::string& buf, const Vec& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) fmt::format_to(std::back_inserter(buf), ",{}", v(k));
}

}  // namespace

std::vector<std::string> trace_columns(const Scenario& s) {
  const int n = s.state_dim;
  std::vector<std::string> cols{"step", "t"};
  for (int k = 1; k <= n; ++k) cols.push_back(fmt::format("leader_{}", k));
  for (int i = 1; i <= s.n_agents(); ++i) {
    for (const char* name : {"x", "xhat", "u", "uapp", "e", "etrue", "res"}) {
      for (int k = 1; k <= n; ++k) cols.push_back(fmt::format("{}_{}_{}", name, i, k));
    }
    cols.push_back(fmt::format("resinf_{}", i));
    cols.push_back(fmt::format("wnorm_{}", i));
  }
  for (const auto& a : s.attacks) cols.push_back("attack_" + a.id);
  return cols;
}

TraceWriter::TraceWriter(const std::string& path, const Scenario& s) : f_(open_for_write(path)) {
  const auto cols = trace_columns(s);
  std::string header;
  for (std::size_t c = 0; c < cols.size(); ++c) header += (c ? "," : "") + cols[c];
  header += '\n';
  std::fwrite(header.data(), 1, header.size(), f_);
}

TraceWriter::~TraceWriter() {
  if (f_) std::fclose(f_);
}

void TraceWriter::write(const TraceRecord& r) {
  buf_.clear();
  fmt::format_to(std::back_inserter(buf_), "{},{}", r.step, r.t);
  append(buf_, r.leader);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    append(buf_, r.x[i]);
    append(buf_, r.x_hat[i]);
    append(buf_, r.u[i]);
    append(buf_, r.u_applied[i]);
    append(buf_, r.e[i]);
    append(buf_, r.e_true[i]);
    append(buf_, r.residual[i]);
    fmt::format_to(std::back_inserter(buf_), ",{},{}", r.residual[i].lpNorm<Eigen::Infinity>(),
                   r.weight_norm[i]);
  }
  for (bool on : r.attack_active) buf_ += on ? ",1" : ",0";
  buf_ += '\n';
  std::fwrite(buf_.data(), 1, buf_.size(), f_);
}

void TraceWriter::close() {
  if (f_ && std::fclose(f_) != 0) {
    f_ = nullptr;
    throw ConfigError("error while writing trace");
  }
  f_ = nullptr;
}

void write_detection_csv(const std::string& path, const DetectionReport& report, double sample_period) {
  std::FILE* f = open_for_write(path);
  std::string buf = "step,t,agent,residual_inf_norm,alarm\n";
  for (long k = 0; k < report.steps(); ++k) {
    const double t = static_cast<double>(k) * sample_period;
    for (int i = 0; i < report.agents(); ++i) {
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{}\n", k, t, i + 1,
                     report.norms[k][i], report.alarm(k, i) ? 1 : 0);
    }
    if (buf.size() > (1u << 16)) {
      std::fwrite(buf.data(), 1, buf.size(), f);
      buf.clear();
    }
  }
  std::fwrite(buf.data(), 1, buf.size(), f);
  std::fclose(f);
}

void write_residual_files(const std::string& dir, const DetectionReport& report, double sample_period) {
  for (int i = 0; i < report.agents(); ++i) {
    const auto path = (std::filesystem::path(dir) / fmt::format("residual_agent{}.csv", i + 1)).string();
    std::FILE* f = open_for_write(path);
    std::string buf = "step,t,norm,threshold\n";
    for (long k = 0; k < report.steps(); ++k) {
      fmt::format_to(std::back_inserter(buf), "{},{},{},{}\n", k, static_cast<double>(k) * sample_period,
                     report.norms[k][i], report.threshold);
      if (buf.size() > (1u << 16)) {
        std::fwrite(buf.data(), 1, buf.size(), f);
        buf.clear();
      }
    }
    std::fwrite(buf.data(), 1, buf.size(), f);
    std::fclose(f);
  }
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::FILE* f = open_for_write(path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

std::string format_intervals(const std::vector<AlarmInterval>& intervals, double sample_period) {
  if (intervals.empty()) return "none";
  std::string out;
  for (const auto& iv : intervals) {
    if (!out.empty()) out += ",";
    out += fmt::format("{:.3f}-{:.3f}", static_cast<double>(iv.start) * sample_period,
                       static_cast<double>(iv.end) * sample_period);
  }
  return out;
}

}  // namespace formguard
