#include "orbitlift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orbitlift/errors.hpp"

namespace orbitlift {

RightInverseOperator right_inverse(const GeneratorFrame& frame, double tol_rank) {
  return RightInverseOperator{frame.point, pseudo_inverse(frame.matrix, tol_rank), frame,
                              tol_rank};
}

namespace {

struct VelocitySource {
  const ActionSpec& action;
  const Curve& curve;
  const LiftOptions& options;

  AlgebraVector operator()(double t) const {
    const Vector y = curve(t);
    const Vector dc = curve.derivative(t);
    const GeneratorFrame frame = generator_frame(action, y);
    const TangentFrame tf = tangent_frame(frame, options.tol_rank);
    const double l = (dc - tf.project(dc)).norm();
    if (!(l <= options.tol_tangency)) throw NotTangent(t, l);
    Vector v = right_inverse(frame, options.tol_rank).matrix * dc;
    if (options.stabilizer_gauge) {
      const Vector w = options.stabilizer_gauge(t, y).coords;
      const Matrix kernel = null_space_basis(frame.matrix, options.tol_rank);
      v += kernel * (kernel.transpose() * w);
    }
    return AlgebraVector(std::move(v));
  }
};

// One exponential step C -> exp(Omega) C for C' = A(t) C.
Matrix magnus_increment(const LieGroupSpec& group, const VelocitySource& velocity,
                        double t, double h, int order) {
  if (order == 2) {
    return h * algebra_matrix(group, velocity(t + 0.5 * h));
  }
  const double offset = std::sqrt(3.0) / 6.0;
  const Matrix a1 = algebra_matrix(group, velocity(t + (0.5 - offset) * h));
  const Matrix a2 = algebra_matrix(group, velocity(t + (0.5 + offset) * h));
  return 0.5 * h * (a1 + a2) + (std::sqrt(3.0) / 12.0) * h * h * commutator(a2, a1);
}

std::vector<double> side_times(double end, int steps) {
  std::vector<double> times(steps + 1);
  const double h = end / steps;
  for (int k = 0; k <= steps; ++k) times[k] = k * h;
  times[steps] = end;
  return times;
}

}  // namespace

AlgebraVector lift_velocity(const ActionSpec& action, const Curve& curve, double t,
                            double tol_rank, double tol_tangency) {
  LiftOptions options;
  options.tol_rank = tol_rank;
  options.tol_tangency = tol_tangency;
  return VelocitySource{action, curve, options}(t);
}

LiftResult lift_curve(const ActionSpec& action, const Curve& curve,
                      const LiftOptions& options) {
  const double lo = options.t_min;
  const double hi = options.t_max;
  if (!(lo <= 0.0 && 0.0 <= hi && lo < hi))
    throw std::invalid_argument("lift_curve: t_span must contain 0");
  if (options.steps < 2) throw std::invalid_argument("lift_curve: steps must be >= 2");
  if (options.order != 2 && options.order != 4)
    throw std::invalid_argument("lift_curve: order must be 2 or 4");

  int forward_steps = options.steps;
  int backward_steps = 0;
  if (lo < 0.0 && hi > 0.0) {
    forward_steps = static_cast<int>(std::lround(options.steps * hi / (hi - lo)));
    forward_steps = std::clamp(forward_steps, 1, options.steps - 1);
    backward_steps = options.steps - forward_steps;
  } else if (hi == 0.0) {
    forward_steps = 0;
    backward_steps = options.steps;
  }

  LiftResult result;
  result.base_point = curve(0.0);
  result.integrator.order = options.order;
  result.integrator.steps = options.steps;
  result.integrator.step_forward = forward_steps > 0 ? hi / forward_steps : 0.0;
  result.integrator.step_backward = backward_steps > 0 ? -lo / backward_steps : 0.0;

  const std::vector<double> fwd =
      forward_steps > 0 ? side_times(hi, forward_steps) : std::vector<double>{0.0};
  const std::vector<double> bwd =
      backward_steps > 0 ? side_times(lo, backward_steps) : std::vector<double>{0.0};
  result.times.assign(bwd.rbegin(), bwd.rend());
  result.times.insert(result.times.end(), fwd.begin() + 1, fwd.end());
  result.base_index = bwd.size() - 1;

  assert_rank_constancy(action, curve, result.times, options.tol_rank);

  const VelocitySource velocity{action, curve, options};
  const GroupPtr& group = action.group;
  const Vector& x = result.base_point;

  auto integrate_side = [&](const std::vector<double>& ts) {
    std::vector<GroupElement> out;
    out.reserve(ts.size());
    out.push_back(GroupElement::identity(group));
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double h = ts[k + 1] - ts[k];
      const Matrix omega = magnus_increment(*group, velocity, ts[k], h, options.order);
      GroupElement next(group, matrix_exp(omega) * out.back().matrix());
      next = reproject(next);
      const double residual = (action.apply(next, x) - curve(ts[k + 1])).norm();
      if (!(residual <= options.abort_threshold)) throw ResidualBlowup(ts[k + 1], residual);
      out.push_back(std::move(next));
    }
    return out;
  };

  std::vector<GroupElement> forward = integrate_side(fwd);
  std::vector<GroupElement> backward = integrate_side(bwd);

  result.elements.reserve(result.times.size());
  result.elements.insert(result.elements.end(), backward.rbegin(), backward.rend());
  result.elements.insert(result.elements.end(), forward.begin() + 1, forward.end());

  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const double t = result.times[i];
    result.algebra_velocities.push_back(velocity(t));
    const double residual = (action.apply(result.elements[i], x) - curve(t)).norm();
    result.lift_residuals.push_back(residual);
    result.membership_residuals.push_back(result.elements[i].membership_residual());
    result.max_lift_residual = std::max(result.max_lift_residual, residual);
  }
  return result;
}

std::vector<double> conjugate_drift(const LiftResult& result, const Curve& curve,
                                    const ActionSpec& action) {
  const std::size_t m = result.times.size();
  if (m < 3) throw std::invalid_argument("conjugate_drift: need at least 3 nodes");
  std::vector<Vector> pulled(m);
  for (std::size_t i = 0; i < m; ++i) {
    pulled[i] = action.apply(inverse(result.elements[i]), curve(result.times[i]));
  }
  std::vector<double> drift(m - 2);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    drift[i - 1] =
        (pulled[i + 1] - pulled[i - 1]).norm() / (result.times[i + 1] - result.times[i - 1]);
  }
  return drift;
}

LiftReport verify_lift(const LiftResult& result, const Curve& curve,
                       const ActionSpec& action, const VerifyTolerances& tol) {
  LiftReport report;
  report.max_lift_residual = result.max_lift_residual;
  for (double r : result.membership_residuals)
    report.max_membership_residual = std::max(report.max_membership_residual, r);
  if (result.times.size() >= 3) {
    for (double dr : conjugate_drift(result, curve, action))
      report.max_conjugate_drift = std::max(report.max_conjugate_drift, dr);
  }
  if (!(report.max_lift_residual <= tol.lift)) report.failures.push_back("lift_residual");
  if (!(report.max_membership_residual <= tol.membership))
    report.failures.push_back("membership_residual");
  if (!(report.max_conjugate_drift <= tol.drift)) report.failures.push_back("conjugate_drift");
  report.pass = report.failures.empty();
  return report;
}

}  // namespace orbitlift
