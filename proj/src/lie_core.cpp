#include "orbitlift/lie_core.hpp"

#include <stdexcept>

#include "orbitlift/errors.hpp"

namespace orbitlift {

std::shared_ptr<const LieGroupSpec> LieGroupSpec::make(
    std::string name, int n, std::vector<Matrix> basis, Residual residual,
    std::optional<Reprojection> reprojection) {
  if (n <= 0) throw std::invalid_argument("LieGroupSpec: n must be positive");
  if (!residual) throw std::invalid_argument("LieGroupSpec: membership residual required");
  const int d = static_cast<int>(basis.size());
  Matrix stacked(d, n * n);
  for (int j = 0; j < d; ++j) {
    if (basis[j].rows() != n || basis[j].cols() != n)
      throw std::invalid_argument("LieGroupSpec: basis matrix has wrong shape");
    stacked.row(j) = basis[j].reshaped().transpose();
  }
  if (d > 0 && numerical_rank(stacked, 1e-12) != d)
    throw std::invalid_argument("LieGroupSpec: algebra basis is linearly dependent");
  if (residual(Matrix::Identity(n, n)) != 0.0)
    throw std::invalid_argument("LieGroupSpec: identity is not a member");

  auto spec = std::make_shared<LieGroupSpec>();
  spec->name = std::move(name);
  spec->n = n;
  spec->d = d;
  spec->algebra_basis = std::move(basis);
  spec->membership_residual = std::move(residual);
  spec->reprojection = std::move(reprojection);
  return spec;
}

Matrix algebra_matrix(const LieGroupSpec& group, const AlgebraVector& v) {
  if (v.size() != group.d)
    throw std::invalid_argument("algebra vector length does not match group dimension");
  Matrix m = Matrix::Zero(group.n, group.n);
  for (int j = 0; j < group.d; ++j) m += v[j] * group.algebra_basis[j];
  return m;
}

GroupElement::GroupElement(GroupPtr group, Matrix matrix)
    : group_(std::move(group)), matrix_(std::move(matrix)) {
  if (!group_) throw std::invalid_argument("GroupElement: null group");
  if (matrix_.rows() != group_->n || matrix_.cols() != group_->n)
    throw std::invalid_argument("GroupElement: matrix has wrong shape");
}

GroupElement GroupElement::identity(GroupPtr group) {
  const int n = group->n;
  return GroupElement(std::move(group), Matrix::Identity(n, n));
}

GroupElement GroupElement::checked(GroupPtr group, Matrix matrix, double tol) {
  if (!all_finite(matrix)) throw NonFiniteInput("group element has non-finite entries");
  GroupElement g(std::move(group), std::move(matrix));
  const double res = g.membership_residual();
  if (!(res <= tol))
    throw NotInGroup("matrix is not a member of " + g.group().name);
  return g;
}

GroupElement exp(const GroupPtr& group, const AlgebraVector& v) {
  if (!all_finite(v.coords)) throw NonFiniteInput("exp: non-finite algebra coordinates");
  return GroupElement(group, matrix_exp(algebra_matrix(*group, v)));
}

GroupElement exp(const GroupPtr& group, const Matrix& algebra_element) {
  if (!all_finite(algebra_element)) throw NonFiniteInput("exp: non-finite matrix");
  if (algebra_element.rows() != group->n || algebra_element.cols() != group->n)
    throw std::invalid_argument("exp: matrix has wrong shape");
  return GroupElement(group, matrix_exp(algebra_element));
}

bool same_group(const LieGroupSpec& a, const LieGroupSpec& b) {
  return &a == &b || (a.name == b.name && a.n == b.n && a.d == b.d);
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  if (!same_group(a.group(), b.group()))
    throw GroupMismatch("multiply: " + a.group().name + " vs " + b.group().name);
  return GroupElement(a.group_ptr(), a.matrix() * b.matrix());
}

GroupElement inverse(const GroupElement& a) {
  Eigen::FullPivLU<Matrix> lu(a.matrix());
  if (!lu.isInvertible()) throw SingularMatrix("inverse: singular group matrix");
  return GroupElement(a.group_ptr(), lu.inverse());
}

GroupElement reproject(const GroupElement& a) {
  const auto& proj = a.group().reprojection;
  if (!proj) return a;
  return GroupElement(a.group_ptr(), (*proj)(a.matrix()));
}

}  // namespace orbitlift
