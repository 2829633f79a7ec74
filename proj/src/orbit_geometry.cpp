#include "orbitlift/orbit_geometry.hpp"

#include <stdexcept>

#include "orbitlift/errors.hpp"

namespace orbitlift {

Vector finite_difference_generator(const ActionSpec& action, int j, const Vector& y,
                                   double s) {
  const auto& basis = action.group->algebra_basis.at(j);
  const Vector plus = action.apply(exp(action.group, Matrix(s * basis)), y);
  const Vector minus = action.apply(exp(action.group, Matrix(-s * basis)), y);
  return (plus - minus) / (2 * s);
}

ActionSpec with_finite_difference_generators(ActionSpec action) {
  action.generator_mode = GeneratorMode::finite_difference;
  return action;
}

GeneratorFrame generator_frame(const ActionSpec& action, const Vector& y) {
  if (y.size() != action.N)
    throw std::invalid_argument("generator_frame: point has wrong dimension");
  if (!all_finite(y)) throw NonFiniteInput("generator_frame: non-finite point");
  const int d = action.group->d;
  GeneratorFrame frame{y, Matrix(action.N, d)};
  for (int j = 0; j < d; ++j) {
    frame.matrix.col(j) = action.generator_mode == GeneratorMode::closed_form
                              ? action.generator(j, y)
                              : finite_difference_generator(action, j, y);
  }
  return frame;
}

int orbit_rank(const GeneratorFrame& frame, double tol_rank) {
  return numerical_rank(frame.matrix, tol_rank);
}

TangentFrame tangent_frame(const GeneratorFrame& frame, double tol_rank) {
  TangentFrame tf;
  tf.point = frame.point;
  tf.tol_rank = tol_rank;
  const Eigen::Index N = frame.matrix.rows();
  if (frame.matrix.cols() == 0) {
    tf.basis = Matrix(N, 0);
    tf.singular_values = Vector(0);
    return tf;
  }
  Eigen::JacobiSVD<Matrix> svd(frame.matrix, Eigen::ComputeThinU);
  tf.singular_values = svd.singularValues();
  tf.rank = count_above(tf.singular_values, tol_rank);
  tf.basis = svd.matrixU().leftCols(tf.rank);
  return tf;
}

double tangency_residual(const ActionSpec& action, const Curve& curve, double t,
                         double tol_rank) {
  const Vector dc = curve.derivative(t);
  const TangentFrame tf = tangent_frame(generator_frame(action, curve(t)), tol_rank);
  return (dc - tf.project(dc)).norm();
}

int assert_rank_constancy(const ActionSpec& action, const Curve& curve,
                          std::span<const double> grid, double tol_rank) {
  if (grid.empty()) throw std::invalid_argument("assert_rank_constancy: empty grid");
  const int r0 = orbit_rank(generator_frame(action, curve(grid[0])), tol_rank);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const int r = orbit_rank(generator_frame(action, curve(grid[i])), tol_rank);
    if (r != r0) throw RankDrift(grid[0], r0, grid[i], r);
  }
  return r0;
}

}  // namespace orbitlift
