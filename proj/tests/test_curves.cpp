#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "orbitlift/catalog.hpp"
#include "orbitlift/curves.hpp"
#include "orbitlift/errors.hpp"
#include "orbitlift/lifting.hpp"

using namespace orbitlift;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector c(v.size());
  int i = 0;
  for (double x : v) c(i++) = x;
  return c;
}

PointSchedule halving_schedule(int count) {
  return PointSchedule::geometric(count, 0.5, 0.5, [](int) { return vec({1, 0}); });
}

PointSchedule zigzag_schedule(int count) {
  return PointSchedule::geometric(count, 0.9, 0.6, [](int n) {
    return vec({std::cos(0.9 * n), std::sin(0.9 * n)});
  });
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("subgroup curve examples") {
  const CatalogEntry so2 = make_entry("so2_r2");
  const Curve still = subgroup_curve(so2.action, vec({0.3, 0.4}), AlgebraVector(vec({0})));
  CHECK(still(0.7) == vec({0.3, 0.4}));
  CHECK(still.derivative(0.7).isZero(0.0));

  const Curve circle = subgroup_curve(so2.action, vec({1, 0}), AlgebraVector(vec({1})));
  for (double t : linspace(-1, 1, 9)) {
    CHECK((circle(t) - vec({std::cos(t), std::sin(t)})).norm() < 1e-15);
    CHECK((circle.derivative(t) - vec({-std::sin(t), std::cos(t)})).norm() < 1e-15);
  }

  const CatalogEntry so3 = make_entry("so3_r3");
  const Curve c = subgroup_curve(so3.action, vec({0.2, -0.5, 0.9}),
                                 AlgebraVector(vec({0.4, 1.2, -0.7})), SpeedProfile::sine());
  CHECK(c(0.0) == vec({0.2, -0.5, 0.9}));
  for (double t : linspace(-0.9, 0.9, 13)) {
    const Vector fd = oracle::central_difference(c.eval, t, 1e-5);
    CHECK((c.derivative(t) - fd).norm() <= 1e-7);
  }
}

TEST_CASE("spline interpolation") {
  SUBCASE("circle samples") {
    const std::vector<double> ts = linspace(-1, 1, 50);
    std::vector<Vector> ys;
    for (double t : ts) ys.push_back(vec({std::cos(t), std::sin(t)}));
    const Curve s = spline_curve(ts, ys);
    CHECK(s.kind == CurveKind::spline);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      const double mid = 0.5 * (ts[i] + ts[i + 1]);
      CHECK((s(mid) - vec({std::cos(mid), std::sin(mid)})).norm() <= 1e-6);
      CHECK((s(ts[i]) - ys[i]).norm() <= 1e-14);
    }
    std::mt19937_64 rng(2);
    CHECK(c1_consistency_defect(s, 100, rng) <= 1e-6);
  }
  SUBCASE("lines are reproduced") {
    const std::vector<double> ts{0.0, 0.1, 0.35, 0.4, 0.9, 1.7};
    std::vector<Vector> ys;
    for (double t : ts) ys.push_back(vec({2 - 3 * t, 0.5 * t, 1.0}));
    const Curve s = spline_curve(ts, ys);
    for (double t : linspace(0, 1.7, 41)) {
      CHECK((s(t) - vec({2 - 3 * t, 0.5 * t, 1.0})).norm() <= 1e-12);
      CHECK((s.derivative(t) - vec({-3, 0.5, 0})).norm() <= 1e-12);
    }
  }
  SUBCASE("cubics are reproduced with four nodes") {
    const std::vector<double> ts{-1.0, 0.0, 0.5, 2.0};
    std::vector<Vector> ys;
    for (double t : ts) ys.push_back(vec({t * t * t - t}));
    const Curve s = spline_curve(ts, ys);
    CHECK(s(1.2)(0) == doctest::Approx(1.2 * 1.2 * 1.2 - 1.2).epsilon(1e-12));
  }
  SUBCASE("too few nodes") {
    const std::vector<double> ts{0, 1, 2};
    const std::vector<Vector> ys{vec({0}), vec({1}), vec({2})};
    CHECK_THROWS_AS(spline_curve(ts, ys), InsufficientNodes);
  }
}

TEST_CASE("spline of measured orbit data lifts") {
  const CatalogEntry e = make_entry("so3_r3");
  const Curve truth =
      subgroup_curve(e.action, vec({0, 0.6, 0.8}), AlgebraVector(vec({0.5, -0.3, 0.8})));
  const std::vector<double> ts = linspace(-0.6, 0.6, 241);
  std::vector<Vector> ys;
  for (double t : ts) ys.push_back(truth(t));
  const Curve s = spline_curve(ts, ys);
  LiftOptions o;
  o.steps = 200;
  o.order = 4;
  const LiftResult r = lift_curve(e.action, s, o);
  CHECK(r.max_lift_residual <= 1e-7);
}

TEST_CASE("curve sample files") {
  const auto path = std::filesystem::temp_directory_path() / "orbitlift_samples.csv";
  {
    std::ofstream out(path);
    out << "# t, x, y\n0, 1, 0\n0.5 , 0.8, 0.6 # comment\n\n1 0 1\n";
  }
  const CurveSamples s = read_curve_samples(path);
  REQUIRE(s.times.size() == 3);
  CHECK(s.times[1] == 0.5);
  CHECK(s.samples[1] == vec({0.8, 0.6}));
  {
    std::ofstream out(path);
    out << "0, 1, 0\n1, 2\n";
  }
  CHECK_THROWS_AS(read_curve_samples(path), ConfigParse);
  {
    std::ofstream out(path);
    out << "0, 1, abc\n";
  }
  CHECK_THROWS_AS(read_curve_samples(path), ConfigParse);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_curve_samples(path), FileIO);
}

TEST_CASE("smoothed chord curve: zero schedule") {
  PointSchedule s = halving_schedule(5);
  for (Vector& p : s.points) p.setZero();
  const ChordFixture f = smoothed_chord_curve(s);
  for (double t : linspace(-0.99, 0.99, 11)) {
    CHECK(f.curve(t).isZero(0.0));
    CHECK(f.curve.derivative(t).isZero(0.0));
  }
}

TEST_CASE("smoothed chord curve: halving schedule on a line") {
  const PointSchedule s = halving_schedule(20);
  const ChordFixture f = smoothed_chord_curve(s);
  REQUIRE(f.node_times.size() == s.times.size());
  CHECK(f.node_times[0] == s.times[0]);
  for (std::size_t n = 0; n < s.times.size(); ++n) {
    CHECK((f.curve(f.node_times[n]) - s.points[n]).norm() <= 1e-15);
    if (n > 0) CHECK(f.node_times[n] < f.node_times[n - 1]);
  }
  for (double t : linspace(-0.999, 0.0, 50)) CHECK(f.curve(t).isZero(0.0));
  const double t = 1e-6;
  CHECK((f.curve(t) - f.curve(0.0)).norm() / t <= 1e-4);
  CHECK(f.curve.derivative(0.0).isZero(0.0));
}

TEST_CASE("smoothed chord curve: C1 with turning chords") {
  const PointSchedule s = zigzag_schedule(16);
  const ChordFixture f = smoothed_chord_curve(s);
  for (std::size_t n = 0; n < s.times.size(); ++n) {
    CHECK((f.curve(f.node_times[n]) - s.points[n]).norm() <= 1e-12);
  }
  std::mt19937_64 rng(9);
  CHECK(c1_consistency_defect(f.curve, 100, rng) <= 1e-6);
  Curve near_zero = f.curve;
  near_zero.domain = {-0.05, 0.05, true};
  CHECK(c1_consistency_defect(near_zero, 100, rng, 1e-7) <= 1e-6);
  // Speed vanishes towards the accumulation point.
  double previous = INFINITY;
  for (double t : {0.1, 0.01, 0.001}) {
    const double speed = f.curve.derivative(t).norm();
    CHECK(speed < previous);
    previous = speed;
  }
  CHECK(previous <= 1e-4);
  // Derivative is continuous across every scheduled point.
  for (double tn : f.node_times) {
    const double h = 1e-9 * tn;
    CHECK((f.curve.derivative(tn + h) - f.curve.derivative(tn - h)).norm() <= 1e-6);
  }
}

TEST_CASE("smoothed chord curve: rejected schedules") {
  PointSchedule repeated = halving_schedule(4);
  repeated.points[2] = repeated.points[1];
  CHECK_THROWS_AS(smoothed_chord_curve(repeated), ScheduleOverlap);

  PointSchedule hairpin = PointSchedule::geometric(4, 0.5, 0.5, [](int) { return vec({1, 0}); });
  hairpin.points[1] = vec({0.5, 0});  // back past s_0 along the same line
  hairpin.points[0] = vec({0.1, 0});
  CHECK_THROWS_AS(smoothed_chord_curve(hairpin), ScheduleOverlap);

  PointSchedule short_one = halving_schedule(2);
  CHECK_THROWS_AS(smoothed_chord_curve(short_one), std::invalid_argument);
  PointSchedule unsorted = halving_schedule(4);
  std::swap(unsorted.times[1], unsorted.times[2]);
  CHECK_THROWS_AS(smoothed_chord_curve(unsorted), std::invalid_argument);
}

TEST_CASE("figure eight") {
  CHECK(figure_eight(0.0).isZero(0.0));
  for (double t : linspace(0.1, 3.0, 15)) {
    CHECK((figure_eight(-t) + figure_eight(t)).norm() <= 1e-15);
    CHECK(figure_eight(t).norm() > 0.0);
  }
  const Curve beta = figure_eight_curve();
  std::mt19937_64 rng(4);
  CHECK(c1_consistency_defect(beta, 100, rng) <= 1e-6);
  // Approaches the crossing point only at the ends of the domain.
  CHECK(figure_eight(std::numbers::pi - 1e-9).norm() < 1e-8);
}

TEST_CASE("pullback probe: branch crossing jumps") {
  const Curve beta = figure_eight_curve();
  const Curve segment = figure_eight_branch_crossing(0.5);
  const std::vector<double> grid = linspace(-0.5, 0.5, 101);
  const PullbackReport report = pullback_continuity_probe(beta, segment, grid);
  CHECK_FALSE(report.continuous);
  CHECK(report.gap >= 1.0);
  CHECK(std::abs(report.jump_at) <= 0.01 + 1e-12);
  // Dense-search oracle agrees with the probe's pullback.
  for (std::size_t i = 0; i < grid.size(); i += 5) {
    const double lo = -std::numbers::pi * (1 - 1e-6);
    const double tau = oracle::brute_force_nearest(beta.eval, segment(grid[i]), lo, -lo, 200000);
    CHECK(std::abs(tau - report.parameters[i]) <= 1e-3);
  }
}

TEST_CASE("pullback probe: smooth reparametrizations are continuous") {
  const Curve beta = figure_eight_curve();
  Curve test = beta;
  test.domain = {-1, 1, false};
  test.eval = [](double s) { return figure_eight(2 * std::sin(s)); };
  test.deriv = [&beta](double s) -> Vector {
    return 2 * std::cos(s) * beta.derivative(2 * std::sin(s));
  };
  const std::vector<double> grid = linspace(-1, 1, 201);
  const PullbackReport report = pullback_continuity_probe(beta, test, grid);
  CHECK(report.continuous);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(report.parameters[i] == doctest::Approx(2 * std::sin(grid[i])).epsilon(1e-9));
  }
}

TEST_CASE("pullback probe: samples off the image") {
  const Curve beta = figure_eight_curve();
  Curve off = figure_eight_branch_crossing(0.5);
  off.eval = [](double s) -> Vector { return vec({0.3, 0.3 + s}); };
  const std::vector<double> grid = linspace(-0.1, 0.1, 5);
  CHECK_THROWS_AS(pullback_continuity_probe(beta, off, grid), NotInImage);
}

}  // TEST_SUITE
