#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "orbitlift/errors.hpp"
#include "orbitlift/experiment.hpp"

using namespace orbitlift;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "orbitlift_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kCircle = R"(
[action]
name = so2_r2

[curve]
kind = subgroup
x = 1 0
omega = 1

[lift]
t_span = -0.5 0.5
)";

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ORBITLIFT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config_text(kCircle);
  CHECK(c.action_name == "so2_r2");
  CHECK(c.t_min == -0.5);
  CHECK(c.t_max == 0.5);
  CHECK(c.steps == 1000);
  CHECK(c.order == 2);
  REQUIRE(c.curve.x);
  CHECK(c.curve.x->size() == 2);

  CHECK_THROWS_AS(parse_config_text("[action]\nname = so2_r2\n"), ConfigParse);
  CHECK_THROWS_AS(parse_config_text(std::string(kCircle) + "[lift2]\nsteps = 3\n"), ConfigParse);
  CHECK_THROWS_AS(parse_config_text(std::string(kCircle) + "[run]\nseeed = 3\n"), ConfigParse);
  CHECK_THROWS_AS(parse_config_text("[action]\nname = so2_r2\n[lift]\nt_span = 0.1 0.5\n"),
                  ConfigParse);
  CHECK_THROWS_AS(parse_config_text("[action]\nname = so2_r2\n[lift]\nt_span = -1 1\norder = 3\n"),
                  ConfigParse);
  CHECK_THROWS_AS(
      parse_config_text("[action]\nname = so2_r2\n[lift]\nt_span = -1 1\nsteps = many\n"),
      ConfigParse);
  CHECK_THROWS_AS(parse_config_text("[action\nname = so2_r2\n"), ConfigParse);
  CHECK_THROWS_AS(parse_config(scratch("missing") / "nope.ini"), FileIO);
}

TEST_CASE("circle run passes at defaults") {
  const RunOutcome out = run(parse_config_text(kCircle));
  CHECK(out.exit_code == 0);
  CHECK(out.status == RunStatus::pass);
  CHECK(out.report.max_lift_residual <= 1e-6);
  CHECK(std::isnan(out.conjugate_drifts.front()));
  CHECK(std::isnan(out.conjugate_drifts.back()));
}

TEST_CASE("radial curve is a structural error") {
  ExperimentConfig c = parse_config_text(
      "[action]\nname = so3_r3\n[curve]\nkind = radial\nx = 1 0 0\n[lift]\nt_span = -0.5 0.5\n");
  const RunOutcome out = run(c);
  CHECK(out.exit_code == 3);
  CHECK(out.error.find("NotTangent") != std::string::npos);
}

TEST_CASE("tolerance failures exit with 2") {
  ExperimentConfig c = parse_config_text(kCircle);
  c.curve.speed = "sine";
  c.steps = 4;
  c.tol_lift = 1e-12;
  CHECK(run(c).exit_code == 2);
}

TEST_CASE("sweeps") {
  ExperimentConfig c = parse_config_text(
      "[action]\nname = so3_r3\n[lift]\nt_span = -0.5 0.5\nsteps = 20\norder = 2\n[run]\nseed = 3\n");
  const SweepReport two = sweep(c, 4);
  REQUIRE(two.levels.size() == 4);
  CHECK(two.levels[1].steps == 40);
  CHECK(two.fitted_order >= 1.8);
  CHECK(two.fitted_order <= 2.2);
  CHECK_FALSE(two.floor);

  c.order = 4;
  c.steps = 10;
  const SweepReport four = sweep(c, 4);
  CHECK(four.fitted_order >= 3.6);
  CHECK(four.fitted_order <= 4.4);

  c.curve.omega = Vector::Zero(3);
  const SweepReport still = sweep(c, 3);
  CHECK(still.floor);
  CHECK(std::isnan(still.fitted_order));
  CHECK_THROWS_AS(sweep(c, 2), std::invalid_argument);
}

TEST_CASE("other curve sources") {
  SUBCASE("spline file") {
    const fs::path dir = scratch("spline");
    {
      std::ofstream out(dir / "circle.csv");
      out.precision(17);
      for (int i = 0; i <= 200; ++i) {
        const double t = -0.6 + 1.2 * i / 200;
        out << t << ", " << std::cos(t) << ", " << std::sin(t) << '\n';
      }
      std::ofstream cfg(dir / "run.ini");
      cfg << "[action]\nname = so2_r2\n[curve]\nkind = spline-file\nfile = circle.csv\n"
             "[lift]\nt_span = -0.5 0.5\nsteps = 200\norder = 4\n";
    }
    const ExperimentConfig c = parse_config(dir / "run.ini");
    CHECK(c.curve.file == dir / "circle.csv");
    const RunOutcome out = run(c);
    CHECK(out.exit_code == 0);
    CHECK(out.report.max_lift_residual <= 1e-6);
  }
  SUBCASE("chord schedule lifted through the open SE(2) orbit") {
    const RunOutcome out = run(parse_config_text(
        "[action]\nname = se2_r2\n[curve]\nkind = chord-schedule\n"
        "[lift]\nt_span = -0.5 0.5\nsteps = 1000\norder = 4\n[tolerances]\ndrift = 1e-3\n"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.max_lift_residual <= 1e-6);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(
        build_setup(parse_config_text("[action]\nname = so3_r3\n[curve]\nx = 1 0\n"
                                      "[lift]\nt_span = -0.5 0.5\n")),
        ConfigParse);
  }
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  ExperimentConfig c = parse_config_text(
      "[action]\nname = gl_conj_sym\nparameter = 2\n[lift]\nt_span = -0.5 0.5\nsteps = 200\n"
      "order = 4\n[run]\nseed = 1234\nsweep = 3\n");
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  write_reports(c, run(c), a);
  write_reports(c, run(c), b);
  for (const char* f : {"nodes.csv", "summary.txt", "sweep.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const std::string nodes = slurp(a / "nodes.csv");
  CHECK(nodes.rfind("t,lift_residual,tangency_residual,membership_residual,conjugate_drift\n", 0) == 0);
  CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 202);
  c.seed = 99;
  const fs::path other = scratch("det_c");
  write_reports(c, run(c), other);
  CHECK(slurp(other / "nodes.csv") != nodes);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "circle.ini") << kCircle;
    std::ofstream(dir / "radial.ini")
        << "[action]\nname = so3_r3\n[curve]\nkind = radial\n[lift]\nt_span = -0.5 0.5\n";
    std::ofstream(dir / "no_span.ini") << "[action]\nname = so2_r2\n";
    std::ofstream(dir / "strict.ini")
        << "[action]\nname = so2_r2\n[curve]\nspeed = sine\n[lift]\nt_span = -0.5 0.5\n"
           "steps = 10\n[tolerances]\nlift = 1e-12\n";
  }
  const std::string out = " --quiet --output-dir " + (dir / "out").string();
  CHECK(run_cli((dir / "circle.ini").string() + out) == 0);
  CHECK(fs::exists(dir / "out" / "nodes.csv"));
  CHECK(slurp(dir / "out" / "summary.txt").find("status = pass") != std::string::npos);
  CHECK(run_cli((dir / "radial.ini").string() + out + " --seed 5") == 3);
  CHECK(slurp(dir / "out" / "summary.txt").find("NotTangent") != std::string::npos);
  CHECK(run_cli((dir / "no_span.ini").string() + out) == 1);
  CHECK(run_cli((dir / "strict.ini").string() + out) == 2);
  CHECK(run_cli((dir / "circle.ini").string() + out + " --sweep 3") == 0);
  CHECK(fs::exists(dir / "out" / "sweep.csv"));
  CHECK(run_cli((dir / "circle.ini").string() + out + " --sweep 2") == 1);
  CHECK(run_cli("") != 0);
}

}  // TEST_SUITE
