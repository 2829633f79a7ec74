#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orbitlift/curve.hpp"
#include "orbitlift/lie_core.hpp"
#include "orbitlift/orbit_geometry.hpp"

namespace orbitlift {

inline constexpr double kDefaultTolTangency = 1e-6;
inline constexpr double kDefaultAbortThreshold = 1e-2;

/// Pseudoinverse of the generator frame: maps orbit tangent vectors to the
/// minimal-norm algebra element generating them.
struct RightInverseOperator {
  Vector point;
  Matrix matrix;  // d x N
  GeneratorFrame source_frame;
  double tol_rank = kDefaultTolRank;

  AlgebraVector operator()(const Vector& tangent) const {
    return AlgebraVector(matrix * tangent);
  }
};

RightInverseOperator right_inverse(const GeneratorFrame& frame,
                                   double tol_rank = kDefaultTolRank);

/// v(t) = r(t) c'(t). Throws NotTangent when l(t) > tol_tangency.
AlgebraVector lift_velocity(const ActionSpec& action, const Curve& curve, double t,
                            double tol_rank = kDefaultTolRank,
                            double tol_tangency = kDefaultTolTangency);

struct LiftOptions {
  double t_min = -0.5;
  double t_max = 0.5;
  int steps = 1000;
  int order = 2;  // 2: exponential midpoint, 4: two-node Gauss-Legendre Magnus
  double tol_rank = kDefaultTolRank;
  double tol_tangency = kDefaultTolTangency;
  double abort_threshold = kDefaultAbortThreshold;
  /// Optional extra algebra velocity at (t, c(t)); only its component in the
  /// stabilizer algebra (kernel of the generator frame) is added to v(t).
  std::function<AlgebraVector(double, const Vector&)> stabilizer_gauge;
};

struct IntegratorInfo {
  int order = 2;
  int steps = 0;
  double step_forward = 0.0;   // h on [0, t_max]
  double step_backward = 0.0;  // |h| on [t_min, 0]
};

/// Sampled lift C(t_i) of a curve through x = c(0). Times increase over the
/// whole span; elements[base_index] is the identity at t = 0.
struct LiftResult {
  Vector base_point;
  std::vector<double> times;
  std::vector<GroupElement> elements;
  std::vector<AlgebraVector> algebra_velocities;
  std::vector<double> lift_residuals;
  std::vector<double> membership_residuals;
  double max_lift_residual = 0.0;
  std::size_t base_index = 0;
  IntegratorInfo integrator;
};

/// Integrates C' = v(t) C, C(0) = e with v(t) = r(t) c'(t), from t = 0 towards
/// both ends of [t_min, t_max].
LiftResult lift_curve(const ActionSpec& action, const Curve& curve,
                      const LiftOptions& options = {});

/// Per interior node, the central difference norm of t -> C(t)^{-1} c(t).
std::vector<double> conjugate_drift(const LiftResult& result, const Curve& curve,
                                    const ActionSpec& action);

struct VerifyTolerances {
  double lift = 1e-6;
  double membership = kDefaultTolGroup;
  double drift = 1e-5;
};

struct LiftReport {
  double max_lift_residual = 0.0;
  double max_membership_residual = 0.0;
  double max_conjugate_drift = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

LiftReport verify_lift(const LiftResult& result, const Curve& curve,
                       const ActionSpec& action, const VerifyTolerances& tol = {});

}  // namespace orbitlift
