#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "orbitlift/lie_core.hpp"
#include "orbitlift/orbit_geometry.hpp"

namespace orbitlift {

/// A verified group/action pair with its known orbit rank.
struct CatalogEntry {
  std::string name;
  GroupPtr group;
  ActionSpec action;
  std::function<int(const Vector&)> expected_rank;
  std::string notes;
  /// Random point off the degenerate set (fixed points, rank drops).
  std::function<Vector(std::mt19937_64&)> sample_point;
};

/// Names: so2_r2, so3_r3, se2_r2, gl_conj_sym (parameter n >= 1, default 2),
/// scale_rn (n >= 1, default 2), trivial (N >= 1, default 2).
/// A parameter <= 0 selects the default. Throws UnknownEntry.
CatalogEntry make_entry(const std::string& name, int parameter = 0);

/// One entry per catalog name, with the default parameters and gl_conj_sym(3).
std::vector<CatalogEntry> standard_catalog();

/// Algebra coordinates uniform in [-scale, scale]^d.
AlgebraVector random_algebra(const LieGroupSpec& group, std::mt19937_64& rng,
                             double scale = 1.0);

/// Symmetric n x n matrix <-> R^{n(n+1)/2}: diagonal entries first, then the
/// upper off-diagonal entries (row-major) scaled by sqrt(2), so the Euclidean
/// inner product matches the Frobenius one.
Vector flatten_symmetric(const Matrix& a);
Matrix unflatten_symmetric(const Vector& v, int n);

}  // namespace orbitlift
