#pragma once

#include <functional>
#include <span>

#include "orbitlift/curve.hpp"
#include "orbitlift/lie_core.hpp"

namespace orbitlift {

inline constexpr double kDefaultTolRank = 1e-8;
inline constexpr double kFiniteDifferenceStep = 1e-5;

enum class GeneratorMode { closed_form, finite_difference };

/// A smooth left action of a matrix group on R^N.
struct ActionSpec {
  using Apply = std::function<Vector(const GroupElement&, const Vector&)>;
  /// Infinitesimal generator d/ds apply(exp(s Gamma_j), y) at s = 0.
  using Generator = std::function<Vector(int, const Vector&)>;

  GroupPtr group;
  int N = 0;
  Apply apply;
  Generator generator;
  GeneratorMode generator_mode = GeneratorMode::closed_form;

  Vector act(const GroupElement& g, const Vector& y) const { return apply(g, y); }
};

/// Central difference (apply(exp(s G_j), y) - apply(exp(-s G_j), y)) / 2s.
Vector finite_difference_generator(const ActionSpec& action, int j, const Vector& y,
                                   double s = kFiniteDifferenceStep);

/// Copy of the action whose generators are computed by central differences.
ActionSpec with_finite_difference_generators(ActionSpec action);

/// Column j is the generator of basis element j at `point` (N x d).
struct GeneratorFrame {
  Vector point;
  Matrix matrix;
};

struct TangentFrame {
  Vector point;
  Matrix basis;  // N x rank, orthonormal columns
  int rank = 0;
  Vector singular_values;
  double tol_rank = kDefaultTolRank;

  /// Orthogonal projection onto the span of `basis`.
  Vector project(const Vector& v) const { return basis * (basis.transpose() * v); }
};

GeneratorFrame generator_frame(const ActionSpec& action, const Vector& y);

int orbit_rank(const GeneratorFrame& frame, double tol_rank = kDefaultTolRank);

TangentFrame tangent_frame(const GeneratorFrame& frame, double tol_rank = kDefaultTolRank);

/// Length of the component of c'(t) orthogonal to the orbit tangent space at c(t).
double tangency_residual(const ActionSpec& action, const Curve& curve, double t,
                         double tol_rank = kDefaultTolRank);

/// Common orbit rank over the grid; throws RankDrift on the first change.
int assert_rank_constancy(const ActionSpec& action, const Curve& curve,
                          std::span<const double> grid,
                          double tol_rank = kDefaultTolRank);

}  // namespace orbitlift
