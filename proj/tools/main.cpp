// formguard command-line front end.
#include <CLI11.hpp>

#include <iostream>

#include "formguard/commands.hpp"

int main(int argc, char** argv) {
  using namespace formguard;

  CLI::App app{"Leader-follower formation simulator with residual-based attack detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "formguard 1.0");

  CommandOptions opts;
  std::string scenario;
  std::string attack_id;
  std::optional<std::string> bounds_out;
  long horizon = 0;
  long seed = 0;

  std::vector<CLI::Option*> horizon_opts, seed_opts;
  auto common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario, "Scenario file (TOML)")->required()->check(CLI::ExistingFile);
    horizon_opts.push_back(
        sub->add_option("--horizon-override", horizon, "Run this many steps instead of the scenario horizon")
            ->check(CLI::PositiveNumber));
    seed_opts.push_back(sub->add_option("--seed", seed, "Reserved; the model has no randomness"));
  };

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write trace, detection report and summary");
  common(simulate);
  simulate->add_option("-o,--output-dir", opts.output_dir, "Directory for output files");
  simulate->add_flag("--force", opts.force, "Run even when the gain conditions fail");

  auto* validate = app.add_subcommand("validate-gains", "Check the closed-loop gain conditions");
  common(validate);
  validate->add_flag("--worst-case-activation", opts.worst_case_activation,
                     "Use the constructive activation bound sqrt(neurons)");
  double phi = 0.0;
  auto* phi_opt = validate->add_option("--phi-bound", phi, "Use this activation bound")
                      ->check(CLI::NonNegativeNumber);

  auto* calib = app.add_subcommand("calibrate", "Measure bound constants on an attack-free run");
  common(calib);
  std::string bounds_path;
  auto* bounds_opt =
      calib->add_option("bounds", bounds_path, "Output bound-set file (default <output-dir>/bounds.txt)");
  calib->add_option("-o,--output-dir", opts.output_dir, "Directory for output files");
  calib->add_flag("--force", opts.force, "Calibrate even when the gain conditions fail");

  auto* detect = app.add_subcommand("detectability", "Evaluate the detectability margin over an attack window");
  common(detect);
  detect->add_option("attack", attack_id, "Attack id")->required();
  detect->add_option("-o,--output-dir", opts.output_dir, "Directory for the step-wise CSV");
  detect->add_option("--report-every", opts.report_every, "Print every N steps")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }
  for (auto* o : horizon_opts) {
    if (o->count()) opts.horizon_override = horizon;
  }
  for (auto* o : seed_opts) {
    if (o->count()) opts.seed = seed;
  }
  if (phi_opt->count()) opts.phi_bound = phi;
  if (bounds_opt->count()) bounds_out = bounds_path;

  if (*simulate) return cmd_simulate(scenario, opts, std::cout, std::cerr);
  if (*validate) return cmd_validate_gains(scenario, opts, std::cout, std::cerr);
  if (*calib) return cmd_calibrate(scenario, bounds_out, opts, std::cout, std::cerr);
  if (*detect) return cmd_detectability(scenario, attack_id, opts, std::cout, std::cerr);
  return kExitInvalid;
}
