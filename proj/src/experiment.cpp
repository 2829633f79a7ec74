#include "orbitlift/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "orbitlift/curves.hpp"
#include "orbitlift/errors.hpp"

namespace orbitlift {

namespace pt = boost::property_tree;

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

LiftOptions ExperimentConfig::lift_options() const {
  LiftOptions o;
  o.t_min = t_min;
  o.t_max = t_max;
  o.steps = steps;
  o.order = order;
  o.tol_rank = tol_rank;
  o.tol_tangency = tol_tangency;
  o.abort_threshold = abort_threshold;
  return o;
}

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys{
    {"action", {"name", "parameter"}},
    {"curve",
     {"kind", "speed", "omega", "x", "file", "schedule_count", "schedule_first",
      "schedule_ratio", "schedule_turn"}},
    {"lift", {"t_span", "steps", "order"}},
    {"tolerances", {"rank", "tangency", "group", "lift", "drift", "abort"}},
    {"run", {"seed", "output", "sweep"}},
};

Vector parse_vector(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (!in.eof() || values.empty()) throw ConfigParse("bad vector for " + key + ": " + text);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

template <typename T>
T get_value(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '/'));
  if (!node) return fallback;
  const auto value = node->get_value_optional<T>();
  if (!value) throw ConfigParse("bad value for " + key + ": " + node->data());
  return *value;
}

std::optional<std::string> get_text(const pt::ptree& tree, const std::string& key) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '/'));
  if (!node) return std::nullopt;
  return node->data();
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigParse(std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end() || body.empty())
      throw ConfigParse("unknown config section: " + section);
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) throw ConfigParse("unknown key " + section + "." + key);
    }
  }

  ExperimentConfig c;
  const auto name = get_text(tree, "action/name");
  if (!name || name->empty()) throw ConfigParse("missing action.name");
  c.action_name = *name;
  c.action_parameter = get_value(tree, "action/parameter", 0);

  c.curve.kind = get_text(tree, "curve/kind").value_or("subgroup");
  c.curve.speed = get_text(tree, "curve/speed").value_or("linear");
  if (auto v = get_text(tree, "curve/omega")) c.curve.omega = parse_vector("curve.omega", *v);
  if (auto v = get_text(tree, "curve/x")) c.curve.x = parse_vector("curve.x", *v);
  if (auto v = get_text(tree, "curve/file")) {
    const std::filesystem::path p(*v);
    c.curve.file = p.is_absolute() ? p : base_dir / p;
  }
  c.curve.schedule_count = get_value(tree, "curve/schedule_count", c.curve.schedule_count);
  c.curve.schedule_first = get_value(tree, "curve/schedule_first", c.curve.schedule_first);
  c.curve.schedule_ratio = get_value(tree, "curve/schedule_ratio", c.curve.schedule_ratio);
  c.curve.schedule_turn = get_value(tree, "curve/schedule_turn", c.curve.schedule_turn);

  const auto span = get_text(tree, "lift/t_span");
  if (!span) throw ConfigParse("missing lift.t_span");
  const Vector s = parse_vector("lift.t_span", *span);
  if (s.size() != 2) throw ConfigParse("lift.t_span needs two numbers");
  c.t_min = s(0);
  c.t_max = s(1);
  c.steps = get_value(tree, "lift/steps", c.steps);
  c.order = get_value(tree, "lift/order", c.order);

  c.tol_rank = get_value(tree, "tolerances/rank", c.tol_rank);
  c.tol_tangency = get_value(tree, "tolerances/tangency", c.tol_tangency);
  c.tol_group = get_value(tree, "tolerances/group", c.tol_group);
  c.tol_lift = get_value(tree, "tolerances/lift", c.tol_lift);
  c.tol_drift = get_value(tree, "tolerances/drift", c.tol_drift);
  c.abort_threshold = get_value(tree, "tolerances/abort", c.abort_threshold);

  c.seed = get_value<std::uint64_t>(tree, "run/seed", 0);
  c.output = get_text(tree, "run/output").value_or(c.output.string());
  c.sweep_levels = get_value(tree, "run/sweep", 0);

  if (!(c.t_min <= 0.0 && 0.0 <= c.t_max && c.t_min < c.t_max))
    throw ConfigParse("lift.t_span must contain 0");
  if (c.steps < 2) throw ConfigParse("lift.steps must be >= 2");
  if (c.order != 2 && c.order != 4) throw ConfigParse("lift.order must be 2 or 4");
  for (double tol : {c.tol_rank, c.tol_tangency, c.tol_group, c.tol_lift, c.tol_drift,
                     c.abort_threshold}) {
    if (!(tol > 0.0)) throw ConfigParse("tolerances must be positive");
  }
  if (!(c.tol_rank < 1.0)) throw ConfigParse("tolerances.rank must be < 1");
  if (c.sweep_levels != 0 && c.sweep_levels < 3) throw ConfigParse("run.sweep must be >= 3");
  static const std::set<std::string> kinds{"subgroup", "radial", "spline-file",
                                           "chord-schedule"};
  if (!kinds.count(c.curve.kind)) throw ConfigParse("unknown curve.kind: " + c.curve.kind);
  if (c.curve.speed != "linear" && c.curve.speed != "sine")
    throw ConfigParse("unknown curve.speed: " + c.curve.speed);
  if (c.curve.kind == "spline-file" && c.curve.file.empty())
    throw ConfigParse("curve.kind = spline-file needs curve.file");
  return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileIO("cannot read config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.parent_path());
}

ExperimentSetup build_setup(const ExperimentConfig& config) {
  ExperimentSetup setup{make_entry(config.action_name, config.action_parameter), {}, {}};
  const ActionSpec& action = setup.entry.action;
  std::mt19937_64 rng(config.seed);
  const Interval domain{config.t_min, config.t_max, false};

  auto base_point = [&]() -> Vector {
    if (config.curve.x) {
      if (config.curve.x->size() != action.N)
        throw ConfigParse("curve.x has wrong dimension for " + config.action_name);
      return *config.curve.x;
    }
    return setup.entry.sample_point(rng);
  };

  const std::string& kind = config.curve.kind;
  if (kind == "subgroup") {
    const Vector x = base_point();
    AlgebraVector omega = random_algebra(*action.group, rng);
    if (config.curve.omega) {
      if (config.curve.omega->size() != action.group->d)
        throw ConfigParse("curve.omega has wrong dimension for " + config.action_name);
      omega = AlgebraVector(*config.curve.omega);
    }
    const SpeedProfile speed =
        config.curve.speed == "sine" ? SpeedProfile::sine() : SpeedProfile::linear();
    setup.curve = subgroup_curve(action, x, omega, speed, domain);
  } else if (kind == "radial") {
    const Vector x = base_point();
    setup.curve.domain = domain;
    setup.curve.dim = action.N;
    setup.curve.eval = [x](double t) -> Vector { return (1.0 + t) * x; };
    setup.curve.deriv = [x](double) -> Vector { return x; };
  } else if (kind == "spline-file") {
    const CurveSamples samples = read_curve_samples(config.curve.file);
    if (!samples.samples.empty() && samples.samples[0].size() != action.N)
      throw ConfigParse("curve samples have wrong dimension for " + config.action_name);
    setup.curve = spline_curve(samples.times, samples.samples);
    if (!(setup.curve.domain.lo <= config.t_min && config.t_max <= setup.curve.domain.hi))
      throw ConfigParse("lift.t_span exceeds the sampled time range");
  } else {
    const int N = action.N;
    const double turn = config.curve.schedule_turn;
    const PointSchedule schedule = PointSchedule::geometric(
        config.curve.schedule_count, config.curve.schedule_first, config.curve.schedule_ratio,
        [N, turn](int n) {
          Vector dir = Vector::Zero(N);
          dir(0) = std::cos(n * turn);
          if (N > 1) dir(1) = std::sin(n * turn);
          return dir;
        });
    if (!(-1.0 < config.t_min && config.t_max < 1.0))
      throw ConfigParse("chord-schedule curves live on ]-1, 1[");
    setup.curve = smoothed_chord_curve(schedule).curve;
  }
  setup.base_point = setup.curve(0.0);
  return setup;
}

SweepReport sweep(const ExperimentConfig& config, int levels) {
  if (levels < 3) throw std::invalid_argument("sweep: need at least 3 levels");
  const ExperimentSetup setup = build_setup(config);
  SweepReport report;
  LiftOptions options = config.lift_options();
  double scale = 1.0;
  for (int k = 0; k < levels; ++k) {
    options.steps = config.steps << k;
    const LiftResult lift = lift_curve(setup.entry.action, setup.curve, options);
    report.levels.push_back(
        {options.steps, (config.t_max - config.t_min) / options.steps, lift.max_lift_residual});
    for (double t : lift.times) scale = std::max(scale, setup.curve(t).norm());
  }
  // Fit only levels above the rounding floor.
  const double floor = 1e-13 * scale;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (const SweepLevel& level : report.levels) {
    if (!(level.max_lift_residual > floor)) continue;
    const double x = std::log(level.step_size);
    const double y = std::log(level.max_lift_residual);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++used;
  }
  if (used < 2) {
    report.floor = true;
    report.fitted_order = std::numeric_limits<double>::quiet_NaN();
  } else {
    report.floor = used < levels;
    report.fitted_order = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  }
  return report;
}

RunOutcome run(const ExperimentConfig& config) {
  RunOutcome outcome;
  const ExperimentSetup setup = build_setup(config);
  const ActionSpec& action = setup.entry.action;
  try {
    LiftResult lift = lift_curve(action, setup.curve, config.lift_options());
    const std::vector<double> drift = conjugate_drift(lift, setup.curve, action);
    outcome.conjugate_drifts.assign(lift.times.size(), std::numeric_limits<double>::quiet_NaN());
    std::copy(drift.begin(), drift.end(), outcome.conjugate_drifts.begin() + 1);
    for (double t : lift.times)
      outcome.tangency_residuals.push_back(
          tangency_residual(action, setup.curve, t, config.tol_rank));
    outcome.report = verify_lift(lift, setup.curve, action,
                                 {config.tol_lift, config.tol_group, config.tol_drift});
    outcome.lift = std::move(lift);
    if (config.sweep_levels >= 3) outcome.sweep = sweep(config, config.sweep_levels);
  } catch (const StructuralError& e) {
    outcome.status = RunStatus::structural_error;
    outcome.exit_code = 3;
    outcome.error = e.what();
    return outcome;
  }
  if (!outcome.report.pass) {
    outcome.status = RunStatus::tolerance_failure;
    outcome.exit_code = 2;
  }
  return outcome;
}

void write_reports(const ExperimentConfig& config, const RunOutcome& outcome,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FileIO("cannot create output directory " + dir.string() + ": " + ec.message());

  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw FileIO("cannot write " + (dir / name).string());
    return out;
  };

  {
    std::ofstream nodes = open("nodes.csv");
    nodes << "t,lift_residual,tangency_residual,membership_residual,conjugate_drift\n";
    if (outcome.lift) {
      const LiftResult& lift = *outcome.lift;
      for (std::size_t i = 0; i < lift.times.size(); ++i) {
        nodes << format_real(lift.times[i]) << ',' << format_real(lift.lift_residuals[i]) << ','
              << format_real(outcome.tangency_residuals[i]) << ','
              << format_real(lift.membership_residuals[i]) << ','
              << format_real(outcome.conjugate_drifts[i]) << '\n';
      }
    }
  }

  const char* status = outcome.status == RunStatus::pass                ? "pass"
                       : outcome.status == RunStatus::tolerance_failure ? "fail"
                                                                        : "error";
  std::ofstream summary = open("summary.txt");
  summary << "action = " << config.action_name << '\n'
          << "curve = " << config.curve.kind << '\n'
          << "order = " << config.order << '\n'
          << "steps = " << config.steps << '\n'
          << "seed = " << config.seed << '\n'
          << "status = " << status << '\n'
          << "exit_code = " << outcome.exit_code << '\n'
          << "error = " << outcome.error << '\n';
  if (outcome.lift) {
    double max_tangency = 0.0;
    for (double l : outcome.tangency_residuals) max_tangency = std::max(max_tangency, l);
    std::string failures;
    for (const std::string& f : outcome.report.failures)
      failures += (failures.empty() ? "" : " ") + f;
    summary << "nodes = " << outcome.lift->times.size() << '\n'
            << "max_lift_residual = " << format_real(outcome.report.max_lift_residual) << '\n'
            << "max_tangency_residual = " << format_real(max_tangency) << '\n'
            << "max_membership_residual = "
            << format_real(outcome.report.max_membership_residual) << '\n'
            << "max_conjugate_drift = " << format_real(outcome.report.max_conjugate_drift)
            << '\n'
            << "failures = " << failures << '\n';
  }
  if (outcome.sweep) {
    summary << "sweep_levels = " << outcome.sweep->levels.size() << '\n'
            << "sweep_fitted_order = " << format_real(outcome.sweep->fitted_order) << '\n'
            << "sweep_floor = " << (outcome.sweep->floor ? "true" : "false") << '\n';
    std::ofstream table = open("sweep.csv");
    table << "steps,h,max_lift_residual\n";
    for (const SweepLevel& level : outcome.sweep->levels)
      table << level.steps << ',' << format_real(level.step_size) << ','
            << format_real(level.max_lift_residual) << '\n';
  }
}

}  // namespace orbitlift
