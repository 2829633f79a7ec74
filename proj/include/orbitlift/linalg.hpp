#pragma once

// Dense kernels shared by the group, orbit and lifting code. All of them take
// Eigen expressions and evaluate them once.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace orbitlift {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().allFinite();
}

/// Matrix commutator [a, b] = ab - ba.
template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a,
                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Result ab = a * b;
  Result ba = b * a;
  return Result(ab - ba);
}

/// Matrix exponential (scaling and squaring with a degree-13 Pade approximant).
template <typename Derived>
auto matrix_exp(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Result m = a;
  return Result(m.exp());
}

/// Count of singular values strictly above rel_tol * sigma_max; 0 for a zero
/// (or empty) matrix.
template <typename DerivedS>
int count_above(const Eigen::MatrixBase<DerivedS>& singular_values,
                typename DerivedS::Scalar rel_tol) {
  if (singular_values.size() == 0) return 0;
  const auto sigma_max = singular_values(0);
  if (!(sigma_max > 0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > rel_tol * sigma_max) ++r;
  }
  return r;
}

/// Numerical rank relative to the largest singular value.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& a,
                   typename Derived::Scalar rel_tol) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<M> svd{M(a)};
  return count_above(svd.singularValues(), rel_tol);
}

/// Moore-Penrose pseudoinverse with singular values at or below
/// rel_tol * sigma_max treated as zero.
template <typename Derived>
auto pseudo_inverse(const Eigen::MatrixBase<Derived>& a,
                    typename Derived::Scalar rel_tol) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  M result = M::Zero(a.cols(), a.rows());
  if (a.size() == 0) return result;
  Eigen::JacobiSVD<M> svd(M(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const V& s = svd.singularValues();
  const int r = count_above(s, rel_tol);
  if (r == 0) return result;
  V inv = V::Zero(s.size());
  for (int i = 0; i < r; ++i) inv(i) = Scalar(1) / s(i);
  result = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return result;
}

/// Orthonormal basis (as columns) of the numerical column space of a.
template <typename Derived>
auto column_space_basis(const Eigen::MatrixBase<Derived>& a,
                        typename Derived::Scalar rel_tol) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.size() == 0) return M(a.rows(), 0);
  Eigen::JacobiSVD<M> svd(M(a), Eigen::ComputeThinU);
  const int r = count_above(svd.singularValues(), rel_tol);
  return M(svd.matrixU().leftCols(r));
}

/// Orthonormal basis of the numerical null space of a (columns in R^cols).
template <typename Derived>
auto null_space_basis(const Eigen::MatrixBase<Derived>& a,
                      typename Derived::Scalar rel_tol) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return M(M::Identity(n, n));
  Eigen::JacobiSVD<M> svd(M(a), Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_tol);
  return M(svd.matrixV().rightCols(n - r));
}

/// Orthogonal polar factor U V^T of a square matrix: the nearest orthogonal
/// matrix in the Frobenius norm.
template <typename Derived>
auto nearest_orthogonal(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<M> svd(M(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return M(svd.matrixU() * svd.matrixV().transpose());
}

/// Defect from SO(n): Gram-matrix deviation plus any negative determinant,
/// ||a^T a - I||_F + max(0, -det a).
template <typename Derived>
typename Derived::Scalar orthogonality_defect(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M m = a;
  const Scalar gram = (m.transpose() * m - M::Identity(m.cols(), m.cols())).norm();
  return gram + std::max(Scalar(0), -m.determinant());
}

}  // namespace orbitlift
