// orbitlift: lift a curve in an orbit back to the acting group and report
// how well the lift reproduces it.
//
//   orbitlift CONFIG [--output-dir DIR] [--seed N] [--sweep L] [--quiet]
//
// Exit codes: 0 pass, 1 config/IO error, 2 tolerance failure, 3 structural
// error (RankDrift, NotTangent, ResidualBlowup).

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "orbitlift/errors.hpp"
#include "orbitlift/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Orbit curve lifting experiments"};
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  int sweep_levels = 0;
  bool quiet = false;
  app.add_option("config", config_path, "Experiment config (INI)")->required();
  app.add_option("--output-dir", output_dir, "Directory for report files");
  app.add_option("--seed", seed, "Override run.seed");
  app.add_option("--sweep", sweep_levels, "Refinement sweep with L >= 3 levels");
  app.add_flag("--quiet", quiet, "Only report errors");
  CLI11_PARSE(app, argc, argv);

  try {
    orbitlift::ExperimentConfig config = orbitlift::parse_config(config_path);
    if (seed) config.seed = *seed;
    if (sweep_levels != 0) {
      if (sweep_levels < 3) throw orbitlift::ConfigParse("--sweep needs L >= 3");
      config.sweep_levels = sweep_levels;
    }
    if (!output_dir.empty()) config.output = output_dir;

    const orbitlift::RunOutcome outcome = orbitlift::run(config);
    orbitlift::write_reports(config, outcome, config.output);

    if (!quiet || outcome.exit_code != 0) {
      std::ostream& out = outcome.exit_code == 0 ? std::cout : std::cerr;
      if (outcome.status == orbitlift::RunStatus::structural_error) {
        out << "error: " << outcome.error << '\n';
      } else {
        out << (outcome.report.pass ? "pass" : "fail")
            << ": max lift residual " << orbitlift::format_real(outcome.report.max_lift_residual)
            << ", max conjugate drift "
            << orbitlift::format_real(outcome.report.max_conjugate_drift) << '\n';
        if (outcome.sweep)
          out << "fitted order " << orbitlift::format_real(outcome.sweep->fitted_order)
              << (outcome.sweep->floor ? " (floor)" : "") << '\n';
      }
      if (!quiet) out << "reports written to " << config.output.string() << '\n';
    }
    return outcome.exit_code;
  } catch (const orbitlift::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
