#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbitlift/linalg.hpp"

namespace orbitlift {

inline constexpr double kDefaultTolGroup = 1e-9;

/// A real matrix Lie group given by n x n matrices together with a basis of
/// its Lie algebra. The basis is treated as orthonormal: every minimal-norm
/// statement in the library refers to coordinates in this basis.
struct LieGroupSpec {
  using Residual = std::function<double(const Matrix&)>;
  using Reprojection = std::function<Matrix(const Matrix&)>;

  std::string name;
  int n = 0;
  int d = 0;
  std::vector<Matrix> algebra_basis;
  Residual membership_residual;
  /// Nearest group element; empty for groups without a cheap projection.
  std::optional<Reprojection> reprojection;

  /// Validates the basis (d linearly independent n x n matrices) and
  /// membership_residual(I) == 0. Throws std::invalid_argument.
  static std::shared_ptr<const LieGroupSpec> make(
      std::string name, int n, std::vector<Matrix> basis, Residual residual,
      std::optional<Reprojection> reprojection = std::nullopt);
};

using GroupPtr = std::shared_ptr<const LieGroupSpec>;

/// Coordinates of a Lie algebra element in the group's algebra basis.
struct AlgebraVector {
  Vector coords;

  AlgebraVector() = default;
  explicit AlgebraVector(Vector c) : coords(std::move(c)) {}
  static AlgebraVector zero(int d) { return AlgebraVector(Vector::Zero(d)); }

  Eigen::Index size() const { return coords.size(); }
  double operator[](Eigen::Index i) const { return coords(i); }
};

/// n x n algebra matrix sum_j v_j Gamma_j.
Matrix algebra_matrix(const LieGroupSpec& group, const AlgebraVector& v);

class GroupElement {
 public:
  /// Wraps a matrix without checking membership; used by the group operations
  /// themselves. Use `checked` for external input.
  GroupElement(GroupPtr group, Matrix matrix);

  static GroupElement identity(GroupPtr group);
  /// Throws NotInGroup if membership_residual(matrix) > tol.
  static GroupElement checked(GroupPtr group, Matrix matrix,
                              double tol = kDefaultTolGroup);

  const Matrix& matrix() const { return matrix_; }
  const LieGroupSpec& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  double membership_residual() const { return group_->membership_residual(matrix_); }

 private:
  GroupPtr group_;
  Matrix matrix_;
};

GroupElement exp(const GroupPtr& group, const AlgebraVector& v);
GroupElement exp(const GroupPtr& group, const Matrix& algebra_element);

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
/// Nearest group element when the group defines a reprojection, otherwise a
/// copy of a.
GroupElement reproject(const GroupElement& a);

bool same_group(const LieGroupSpec& a, const LieGroupSpec& b);

}  // namespace orbitlift
