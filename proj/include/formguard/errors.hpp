#pragma once

#include <stdexcept>
#include <string>

namespace formguard {

/// Malformed input: bad scenario, shape mismatch, violated configuration invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The closed loop left the finite/representable range.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step, int agent)
      : std::runtime_error(what), step_(step), agent_(agent) {}
  long step() const { return step_; }
  int agent() const { return agent_; }

 private:
  long step_;
  int agent_;
};

/// The request is well-formed but not allowed (e.g. calibrating with attacks).
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_dim(long actual, long expected, const char* what);

}  // namespace formguard
