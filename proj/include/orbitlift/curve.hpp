#pragma once

#include <functional>
#include <random>

#include "orbitlift/linalg.hpp"

namespace orbitlift {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool open = false;

  bool contains(double t) const { return open ? (lo < t && t < hi) : (lo <= t && t <= hi); }
  double length() const { return hi - lo; }
};

enum class CurveKind { analytic, spline, piecewise };

/// A parametrized C^k path in R^dim with an evaluable derivative.
struct Curve {
  Interval domain;
  int dim = 0;
  std::function<Vector(double)> eval;
  std::function<Vector(double)> deriv;
  CurveKind kind = CurveKind::analytic;
  int smoothness = 1;

  Vector operator()(double t) const { return eval(t); }
  /// Throws DerivativeUnavailable when the curve carries no derivative.
  Vector derivative(double t) const;
};

/// Largest ||deriv(t) - central_fd(t)|| / max(1, ||deriv(t)||) over `count`
/// uniformly random interior points, with finite-difference step `h`.
double c1_consistency_defect(const Curve& curve, int count, std::mt19937_64& rng,
                             double h = 1e-6);

}  // namespace orbitlift
