#include "orbitlift/catalog.hpp"

#include <cmath>
#include <limits>

#include "orbitlift/errors.hpp"

namespace orbitlift {

namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

// Skew generator with +1 at (i, j) and -1 at (j, i).
Matrix skew(int n, int i, int j) { return Matrix(unit(n, i, j) - unit(n, j, i)); }

GroupPtr special_orthogonal(int n) {
  std::vector<Matrix> basis;
  if (n == 2) {
    basis.push_back(skew(2, 1, 0));
  } else if (n == 3) {
    basis = {skew(3, 2, 1), skew(3, 0, 2), skew(3, 1, 0)};
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) basis.push_back(skew(n, j, i));
  }
  return LieGroupSpec::make(
      "SO(" + std::to_string(n) + ")", n, std::move(basis),
      [](const Matrix& m) { return orthogonality_defect(m); },
      [](const Matrix& m) { return Matrix(nearest_orthogonal(m)); });
}

GroupPtr special_euclidean_2() {
  std::vector<Matrix> basis{skew(3, 1, 0), unit(3, 0, 2), unit(3, 1, 2)};
  auto residual = [](const Matrix& m) {
    Eigen::RowVector3d bottom(0.0, 0.0, 1.0);
    return orthogonality_defect(m.topLeftCorner(2, 2)) + (m.row(2) - bottom).norm();
  };
  auto projection = [](const Matrix& m) {
    Matrix out = m;
    out.topLeftCorner(2, 2) = nearest_orthogonal(m.topLeftCorner(2, 2));
    out.row(2) << 0.0, 0.0, 1.0;
    return out;
  };
  return LieGroupSpec::make("SE(2)", 3, std::move(basis), residual, projection);
}

GroupPtr general_linear(int n) {
  std::vector<Matrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis.push_back(unit(n, i, j));
  return LieGroupSpec::make("GL(" + std::to_string(n) + ")", n, std::move(basis),
                            [](const Matrix& m) {
                              if (!m.allFinite()) return std::numeric_limits<double>::infinity();
                              return m.determinant() != 0.0 ? 0.0 : 1.0;
                            });
}

GroupPtr positive_reals() {
  return LieGroupSpec::make("R+", 1, {Matrix::Ones(1, 1)}, [](const Matrix& m) {
    return m(0, 0) > 0.0 ? 0.0 : 1.0 - m(0, 0);
  });
}

Vector uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Uniform in the cube [-1, 1]^n with norm at least min_norm.
Vector away_from_origin(std::mt19937_64& rng, int n, double min_norm = 0.2) {
  for (;;) {
    Vector v = uniform_vector(rng, n, -1.0, 1.0);
    if (v.norm() >= min_norm) return v;
  }
}

// Linear action y -> g y on R^n by the group's own matrices.
ActionSpec linear_action(GroupPtr group) {
  ActionSpec a;
  a.N = group->n;
  a.apply = [](const GroupElement& g, const Vector& y) -> Vector { return g.matrix() * y; };
  a.generator = [group](int j, const Vector& y) -> Vector {
    return group->algebra_basis[j] * y;
  };
  a.group = std::move(group);
  return a;
}

int rank_off_origin(const Vector& y, int rank) { return y.norm() > 1e-12 ? rank : 0; }

CatalogEntry so2_r2() {
  CatalogEntry e;
  e.name = "so2_r2";
  e.group = special_orthogonal(2);
  e.action = linear_action(e.group);
  e.expected_rank = [](const Vector& y) { return rank_off_origin(y, 1); };
  e.notes = "free off the origin; orbits are circles";
  e.sample_point = [](std::mt19937_64& rng) { return away_from_origin(rng, 2); };
  return e;
}

CatalogEntry so3_r3() {
  CatalogEntry e;
  e.name = "so3_r3";
  e.group = special_orthogonal(3);
  e.action = linear_action(e.group);
  e.expected_rank = [](const Vector& y) { return rank_off_origin(y, 2); };
  e.notes = "non-free; orbits are spheres, stabilizer SO(2) of rotations about y";
  e.sample_point = [](std::mt19937_64& rng) { return away_from_origin(rng, 3); };
  return e;
}

CatalogEntry se2_r2() {
  CatalogEntry e;
  e.name = "se2_r2";
  e.group = special_euclidean_2();
  ActionSpec& a = e.action;
  a.group = e.group;
  a.N = 2;
  a.apply = [](const GroupElement& g, const Vector& y) -> Vector {
    const Matrix& m = g.matrix();
    return m.topLeftCorner(2, 2) * y + m.topRightCorner(2, 1);
  };
  a.generator = [group = e.group](int j, const Vector& y) -> Vector {
    const Matrix& b = group->algebra_basis[j];
    return b.topLeftCorner(2, 2) * y + b.topRightCorner(2, 1);
  };
  e.expected_rank = [](const Vector&) { return 2; };
  e.notes = "single open orbit; non-free, stabilizer SO(2) of rotations about y";
  e.sample_point = [](std::mt19937_64& rng) { return uniform_vector(rng, 2, -2.0, 2.0); };
  return e;
}

CatalogEntry gl_conj_sym(int n) {
  CatalogEntry e;
  e.name = "gl_conj_sym";
  e.group = general_linear(n);
  ActionSpec& a = e.action;
  a.group = e.group;
  a.N = n * (n + 1) / 2;
  a.apply = [n](const GroupElement& g, const Vector& y) -> Vector {
    const Matrix& m = g.matrix();
    return flatten_symmetric(m * unflatten_symmetric(y, n) * m.transpose());
  };
  a.generator = [n, group = e.group](int j, const Vector& y) -> Vector {
    const Matrix& b = group->algebra_basis[j];
    const Matrix s = unflatten_symmetric(y, n);
    return flatten_symmetric(b * s + s * b.transpose());
  };
  e.expected_rank = [n](const Vector& y) {
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(unflatten_symmetric(y, n));
    const Vector lambda = eig.eigenvalues().cwiseAbs();
    const double top = lambda.maxCoeff();
    int k = 0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) k += lambda(i) > 1e-8 * top ? 1 : 0;
    if (!(top > 0)) k = 0;
    return n * k - k * (k - 1) / 2;
  };
  e.notes = "A -> g A g^T on symmetric matrices; non-free, orbits are fixed signature and rank";
  e.sample_point = [n](std::mt19937_64& rng) {
    const Matrix b = uniform_vector(rng, n * n, -1.0, 1.0).reshaped(n, n);
    return flatten_symmetric(b * b.transpose() + 0.5 * Matrix::Identity(n, n));
  };
  return e;
}

CatalogEntry scale_rn(int n) {
  CatalogEntry e;
  e.name = "scale_rn";
  e.group = positive_reals();
  ActionSpec& a = e.action;
  a.group = e.group;
  a.N = n;
  a.apply = [](const GroupElement& g, const Vector& y) -> Vector { return g.matrix()(0, 0) * y; };
  a.generator = [](int, const Vector& y) -> Vector { return y; };
  e.expected_rank = [](const Vector& y) { return rank_off_origin(y, 1); };
  e.notes = "free off the origin; orbits are open rays, the origin is fixed";
  e.sample_point = [n](std::mt19937_64& rng) { return away_from_origin(rng, n); };
  return e;
}

CatalogEntry trivial(int n) {
  CatalogEntry e;
  e.name = "trivial";
  e.group = special_orthogonal(2);
  ActionSpec& a = e.action;
  a.group = e.group;
  a.N = n;
  a.apply = [](const GroupElement&, const Vector& y) -> Vector { return y; };
  a.generator = [n](int, const Vector&) -> Vector { return Vector::Zero(n); };
  e.expected_rank = [](const Vector&) { return 0; };
  e.notes = "SO(2) acting trivially; every point is fixed";
  e.sample_point = [n](std::mt19937_64& rng) { return uniform_vector(rng, n, -1.0, 1.0); };
  return e;
}

}  // namespace

Vector flatten_symmetric(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i) v(k++) = a(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(k++) = std::sqrt(2.0) * 0.5 * (a(i, j) + a(j, i));
  return v;
}

Matrix unflatten_symmetric(const Vector& v, int n) {
  Matrix a(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) a(i, i) = v(k++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = a(j, i) = v(k++) / std::sqrt(2.0);
  return a;
}

CatalogEntry make_entry(const std::string& name, int parameter) {
  auto param = [parameter](int fallback) { return parameter > 0 ? parameter : fallback; };
  if (name == "so2_r2") return so2_r2();
  if (name == "so3_r3") return so3_r3();
  if (name == "se2_r2") return se2_r2();
  if (name == "gl_conj_sym") return gl_conj_sym(param(2));
  if (name == "scale_rn") return scale_rn(param(2));
  if (name == "trivial") return trivial(param(2));
  throw UnknownEntry("unknown catalog entry: " + name);
}

std::vector<CatalogEntry> standard_catalog() {
  return {make_entry("so2_r2"),         make_entry("so3_r3"),      make_entry("se2_r2"),
          make_entry("gl_conj_sym", 2), make_entry("gl_conj_sym", 3), make_entry("scale_rn", 3),
          make_entry("trivial", 2)};
}

AlgebraVector random_algebra(const LieGroupSpec& group, std::mt19937_64& rng, double scale) {
  return AlgebraVector(uniform_vector(rng, group.d, -scale, scale));
}

}  // namespace orbitlift
