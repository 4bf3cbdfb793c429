#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "formguard/bounds.hpp"
#include "formguard/calibration.hpp"
#include "formguard/scenario.hpp"

namespace formguard {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,     // parse or validation error, failed gain conditions
  kExitDiverged = 3,
  kExitRefused = 4,
};

struct CommandOptions {
  std::string output_dir = ".";
  bool force = false;
  std::optional<long> horizon_override;
  std::optional<long> seed;  // accepted for interface stability; the model is deterministic
  bool worst_case_activation = false;
  std::optional<double> phi_bound;
  long report_every = 1000;  // detectability: print every this many steps
};

/// Loads a scenario and applies --horizon-override. A shorter horizon drops
/// attacks that would start after it and clips the rest to the new end.
Scenario load_for_command(const std::string& path, const CommandOptions& opts);

/// Bound set for a scenario: loaded from detection.bounds, or calibrated on
/// the attack-free copy. Relative file paths resolve against `scenario_path`.
struct ResolvedBounds {
  BoundSet bounds;
  std::string source;
  std::optional<CalibrationResult> calibration;
};
ResolvedBounds resolve_bounds(const Scenario& s, const std::string& scenario_path);

int cmd_simulate(const std::string& path, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err);
int cmd_validate_gains(const std::string& path, const CommandOptions& opts, std::ostream& out,
                       std::ostream& err);
/// Writes the bound set to `output` (default <output_dir>/bounds.txt).
int cmd_calibrate(const std::string& path, const std::optional<std::string>& output,
                  const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_detectability(const std::string& path, const std::string& attack_id,
                      const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace formguard
