#pragma once

// Config-driven experiment runner behind the `orbitlift` command line tool.
//
// Config files are INI-style: `[section]` headers and `key = value` lines,
// `;` or `#` comments. Vectors are whitespace separated numbers.
//
//   [action]      name (required), parameter
//   [curve]       kind = subgroup | radial | spline-file | chord-schedule,
//                 speed = linear | sine, omega, x, file,
//                 schedule_count, schedule_first, schedule_ratio, schedule_turn
//   [lift]        t_span = "lo hi" (required, must contain 0), steps, order
//   [tolerances]  rank, tangency, group, lift, drift, abort
//   [run]         seed, output, sweep
//
// Unknown sections or keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "orbitlift/catalog.hpp"
#include "orbitlift/curve.hpp"
#include "orbitlift/lifting.hpp"

namespace orbitlift {

struct CurveRecipe {
  std::string kind = "subgroup";
  std::string speed = "linear";
  std::optional<Vector> omega;
  std::optional<Vector> x;
  std::filesystem::path file;
  int schedule_count = 12;
  double schedule_first = 0.9;
  double schedule_ratio = 0.5;
  double schedule_turn = 0.7;
};

struct ExperimentConfig {
  std::string action_name;
  int action_parameter = 0;
  CurveRecipe curve;
  double t_min = -0.5;
  double t_max = 0.5;
  int steps = 1000;
  int order = 2;
  double tol_rank = kDefaultTolRank;
  double tol_tangency = kDefaultTolTangency;
  double tol_group = kDefaultTolGroup;
  double tol_lift = 1e-6;
  double tol_drift = 1e-5;
  double abort_threshold = kDefaultAbortThreshold;
  std::uint64_t seed = 0;
  std::filesystem::path output = "orbitlift_out";
  int sweep_levels = 0;

  LiftOptions lift_options() const;
};

/// Throws ConfigParse on syntax errors, unknown keys or failed invariants.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir = ".");
/// Relative `file` paths resolve against the config's directory. Throws FileIO.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Curve, action and base point realized from a config (seeded).
struct ExperimentSetup {
  CatalogEntry entry;
  Curve curve;
  Vector base_point;
};

ExperimentSetup build_setup(const ExperimentConfig& config);

struct SweepLevel {
  int steps = 0;
  double step_size = 0.0;
  double max_lift_residual = 0.0;
};

struct SweepReport {
  std::vector<SweepLevel> levels;
  double fitted_order = 0.0;  // NaN when flagged as floor
  bool floor = false;
};

/// Lifts at steps, 2 steps, ..., 2^(levels-1) steps and fits the slope of
/// log(residual) against log(h). Needs levels >= 3.
SweepReport sweep(const ExperimentConfig& config, int levels);

enum class RunStatus { pass, tolerance_failure, structural_error };

struct RunOutcome {
  RunStatus status = RunStatus::pass;
  int exit_code = 0;
  std::string error;
  std::optional<LiftResult> lift;
  std::vector<double> tangency_residuals;  // per lift node
  std::vector<double> conjugate_drifts;    // per lift node, NaN at the ends
  LiftReport report;
  std::optional<SweepReport> sweep;
};

/// Exit codes: 0 pass, 2 tolerance failure, 3 structural error.
RunOutcome run(const ExperimentConfig& config);

/// nodes.csv, summary.txt and, when a sweep ran, sweep.csv under `dir`.
void write_reports(const ExperimentConfig& config, const RunOutcome& outcome,
                   const std::filesystem::path& dir);

/// Fixed-width text: 17 significant digits.
std::string format_real(double value);

}  // namespace orbitlift
