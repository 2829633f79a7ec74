#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "orbitlift/curve.hpp"
#include "orbitlift/lie_core.hpp"
#include "orbitlift/orbit_geometry.hpp"

namespace orbitlift {

/// Smooth reparametrization a(t) with a(0) = 0.
struct SpeedProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static SpeedProfile linear();
  static SpeedProfile sine();
};

/// c(t) = apply(exp(a(t) Omega), x); lies in the orbit through x.
Curve subgroup_curve(const ActionSpec& action, const Vector& x, const AlgebraVector& omega,
                     const SpeedProfile& speed = SpeedProfile::linear(),
                     Interval domain = {-1.0, 1.0, false});

/// C^2 cubic interpolant with not-a-knot end conditions. Needs >= 4 nodes.
Curve spline_curve(std::span<const double> times, std::span<const Vector> samples);

struct CurveSamples {
  std::vector<double> times;
  std::vector<Vector> samples;
};

/// Reads rows `t, x1, ..., xN` (comma or whitespace separated, '#' comments).
CurveSamples read_curve_samples(const std::filesystem::path& path);

/// Decreasing positive times t_n -> 0 with target points s_n -> 0.
struct PointSchedule {
  std::vector<double> times;
  std::vector<Vector> points;

  /// t_n = first * ratio^n, s_n = t_n * direction(n) for n = 0..count-1.
  static PointSchedule geometric(int count, double first, double ratio,
                                 const std::function<Vector(int)>& direction);
};

/// C^1 curve on ]-1, 1[ through every scheduled point, identically 0 for
/// t <= 0 with c'(0) = 0. points[n] is reached at node_times[n].
struct ChordFixture {
  Curve curve;
  std::vector<double> node_times;
  double total_length = 0.0;
};

ChordFixture smoothed_chord_curve(const PointSchedule& schedule);

/// Injective immersion of ]-pi, pi[ onto a figure eight, beta(t) = (sin 2t, sin t).
/// beta(0) is the crossing point; the other branch reaches it as t -> +-pi.
Vector figure_eight(double t);
Curve figure_eight_curve();

/// s -> beta(pi - s): runs along the limiting branch through the crossing point.
Curve figure_eight_branch_crossing(double half_width = 0.5);

struct PullbackReport {
  bool continuous = true;
  double jump_at = 0.0;    // test-curve parameter at the start of the largest jump
  double gap = 0.0;        // largest adjacent parameter jump
  double threshold = 0.0;  // allowed jump at that sample pair
  std::vector<double> parameters;
  std::vector<double> distances;
};

struct PullbackOptions {
  double image_tolerance = 1e-9;
  int search_points = 4096;
  double jump_factor = 10.0;
  /// Parameters closer than this fraction of the domain length to an end of an
  /// open domain are not considered.
  double boundary_margin = 1e-6;
};

/// Nearest-parameter pullback of test_curve through the immersion, with jump
/// detection between adjacent grid samples.
PullbackReport pullback_continuity_probe(const Curve& immersion, const Curve& test_curve,
                                         std::span<const double> grid,
                                         const PullbackOptions& options = {});

/// `count` equally spaced values on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace orbitlift
