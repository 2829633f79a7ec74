#include "orbitlift/curve.hpp"

#include "orbitlift/errors.hpp"

namespace orbitlift {

Vector Curve::derivative(double t) const {
  if (!deriv) throw DerivativeUnavailable("curve has no derivative");
  return deriv(t);
}

double c1_consistency_defect(const Curve& curve, int count, std::mt19937_64& rng,
                             double h) {
  const double lo = curve.domain.lo + 2 * h;
  const double hi = curve.domain.hi - 2 * h;
  std::uniform_real_distribution<double> pick(lo, hi);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double t = pick(rng);
    const Vector d = curve.derivative(t);
    const Vector fd = (curve(t + h) - curve(t - h)) / (2 * h);
    worst = std::max(worst, (d - fd).norm() / std::max(1.0, d.norm()));
  }
  return worst;
}

}  // namespace orbitlift
