#include "orbitlift/curves.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "orbitlift/errors.hpp"

namespace orbitlift {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out[count - 1] = hi;
  return out;
}

SpeedProfile SpeedProfile::linear() {
  return {[](double t) { return t; }, [](double) { return 1.0; }};
}

SpeedProfile SpeedProfile::sine() {
  return {[](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }};
}

Curve subgroup_curve(const ActionSpec& action, const Vector& x, const AlgebraVector& omega,
                     const SpeedProfile& speed, Interval domain) {
  if (!all_finite(x)) throw NonFiniteInput("subgroup_curve: non-finite base point");
  const Matrix omega_matrix = algebra_matrix(*action.group, omega);
  Curve c;
  c.domain = domain;
  c.dim = action.N;
  c.kind = CurveKind::analytic;
  c.smoothness = 3;
  c.eval = [action, x, omega_matrix, speed](double t) -> Vector {
    return action.apply(exp(action.group, Matrix(speed.value(t) * omega_matrix)), x);
  };
  c.deriv = [action, x, omega_matrix, omega, speed](double t) -> Vector {
    const Vector y =
        action.apply(exp(action.group, Matrix(speed.value(t) * omega_matrix)), x);
    return speed.derivative(t) * (generator_frame(action, y).matrix * omega.coords);
  };
  return c;
}

// ---------------------------------------------------------------------------
// Not-a-knot cubic spline

namespace {

struct CubicSpline {
  std::vector<double> t;
  Matrix y;        // nodes x dim
  Matrix second;   // nodes x dim

  std::size_t interval(double s) const {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
    return std::min(i, t.size() - 2);
  }

  Vector eval(double s) const {
    const std::size_t i = interval(s);
    const double h = t[i + 1] - t[i];
    const double u = s - t[i];
    const double w = t[i + 1] - s;
    return (second.row(i) * (w * w * w / (6 * h)) + second.row(i + 1) * (u * u * u / (6 * h)) +
            (y.row(i) / h - second.row(i) * (h / 6)) * w +
            (y.row(i + 1) / h - second.row(i + 1) * (h / 6)) * u)
        .transpose();
  }

  Vector deriv(double s) const {
    const std::size_t i = interval(s);
    const double h = t[i + 1] - t[i];
    const double u = s - t[i];
    const double w = t[i + 1] - s;
    return (-second.row(i) * (w * w / (2 * h)) + second.row(i + 1) * (u * u / (2 * h)) -
            (y.row(i) / h - second.row(i) * (h / 6)) +
            (y.row(i + 1) / h - second.row(i + 1) * (h / 6)))
        .transpose();
  }
};

}  // namespace

Curve spline_curve(std::span<const double> times, std::span<const Vector> samples) {
  const std::size_t n = times.size();
  if (n < 4 || samples.size() != n)
    throw InsufficientNodes("spline_curve: need at least 4 nodes with matching samples");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(times[i] < times[i + 1]))
      throw std::invalid_argument("spline_curve: times must be strictly increasing");
  }
  const Eigen::Index dim = samples[0].size();
  auto spline = std::make_shared<CubicSpline>();
  spline->t.assign(times.begin(), times.end());
  spline->y.resize(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i].size() != dim)
      throw std::invalid_argument("spline_curve: samples have inconsistent dimension");
    spline->y.row(i) = samples[i].transpose();
  }

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = times[i + 1] - times[i];

  std::vector<Eigen::Triplet<double>> entries;
  Matrix rhs = Matrix::Zero(n, dim);
  // Continuous third derivative at the first and last interior node.
  entries.emplace_back(0, 0, h[1]);
  entries.emplace_back(0, 1, -(h[0] + h[1]));
  entries.emplace_back(0, 2, h[0]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    entries.emplace_back(i, i - 1, h[i - 1]);
    entries.emplace_back(i, i, 2 * (h[i - 1] + h[i]));
    entries.emplace_back(i, i + 1, h[i]);
    rhs.row(i) = 6 * ((spline->y.row(i + 1) - spline->y.row(i)) / h[i] -
                      (spline->y.row(i) - spline->y.row(i - 1)) / h[i - 1]);
  }
  entries.emplace_back(n - 1, n - 3, h[n - 2]);
  entries.emplace_back(n - 1, n - 2, -(h[n - 3] + h[n - 2]));
  entries.emplace_back(n - 1, n - 1, h[n - 3]);

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SingularMatrix("spline_curve: singular system");
  spline->second = lu.solve(rhs);

  Curve c;
  c.domain = {times.front(), times.back(), false};
  c.dim = static_cast<int>(dim);
  c.kind = CurveKind::spline;
  c.smoothness = 2;
  c.eval = [spline](double s) { return spline->eval(s); };
  c.deriv = [spline](double s) { return spline->deriv(s); };
  return c;
}

CurveSamples read_curve_samples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileIO("cannot open curve samples: " + path.string());
  CurveSamples out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::vector<double> values;
    double v;
    while (row >> v) values.push_back(v);
    if (!row.eof())
      throw ConfigParse("bad number in " + path.string() + " line " + std::to_string(line_no));
    if (values.empty()) continue;
    if (values.size() < 2)
      throw ConfigParse("row needs t and at least one coordinate: line " +
                        std::to_string(line_no));
    if (!out.samples.empty() &&
        static_cast<std::size_t>(out.samples.back().size()) != values.size() - 1)
      throw ConfigParse("inconsistent column count at line " + std::to_string(line_no));
    out.times.push_back(values[0]);
    out.samples.push_back(Eigen::Map<const Vector>(values.data() + 1, values.size() - 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Smoothed chord curve

PointSchedule PointSchedule::geometric(int count, double first, double ratio,
                                       const std::function<Vector(int)>& direction) {
  PointSchedule s;
  double t = first;
  for (int n = 0; n < count; ++n, t *= ratio) {
    s.times.push_back(t);
    s.points.push_back(t * direction(n));
  }
  return s;
}

namespace {

// Quintic Hermite segment with zero end accelerations.
struct QuinticSegment {
  Vector p0, v0, v1, p1;

  Vector eval(double s) const {
    const double s3 = s * s * s, s4 = s3 * s, s5 = s4 * s;
    return (1 - 10 * s3 + 15 * s4 - 6 * s5) * p0 + (s - 6 * s3 + 8 * s4 - 3 * s5) * v0 +
           (-4 * s3 + 7 * s4 - 3 * s5) * v1 + (10 * s3 - 15 * s4 + 6 * s5) * p1;
  }
  Vector velocity(double s) const {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    return (-30 * s2 + 60 * s3 - 30 * s4) * p0 + (1 - 18 * s2 + 32 * s3 - 15 * s4) * v0 +
           (-12 * s2 + 28 * s3 - 15 * s4) * v1 + (30 * s2 - 60 * s3 + 30 * s4) * p1;
  }
  double speed(double s) const { return velocity(s).norm(); }
  double arc_length(double s) const {
    if (s <= 0) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [this](double u) { return speed(u); }, 0.0, s);
  }
  // Local parameter at arc length `target` (Newton, bracketed in [0, 1]).
  double parameter_at(double target, double length) const {
    double lo = 0.0, hi = 1.0;
    double s = std::clamp(target / length, 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
      const double f = arc_length(s) - target;
      if (f > 0) hi = s; else lo = s;
      double next = s - f / speed(s);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - s) < 1e-16) return next;
      s = next;
    }
    return s;
  }
};

struct PathPiece {
  bool straight = true;
  Vector a, b;              // straight: endpoints
  QuinticSegment quintic;   // otherwise
  double start = 0.0;
  double length = 0.0;

  Vector point(double local) const {
    if (straight) return a + (local / length) * (b - a);
    if (local >= length) return quintic.p1;
    return quintic.eval(quintic.parameter_at(local, length));
  }
  Vector tangent(double local) const {
    if (straight) return (b - a) / length;
    const Vector v = quintic.velocity(quintic.parameter_at(std::min(local, length), length));
    return v / v.norm();
  }
};

// Arc-length parametrized path from the origin through the vertices, corners
// rounded by quintic blends that pass through each vertex.
struct ChordPath {
  std::vector<PathPiece> pieces;
  Vector end_point, end_direction;
  double total = 0.0;

  std::size_t locate(double L) const {
    std::size_t lo = 0, hi = pieces.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (pieces[mid].start <= L) lo = mid; else hi = mid;
    }
    return lo;
  }
  Vector point(double L) const {
    if (L >= total) return end_point + (L - total) * end_direction;
    const PathPiece& p = pieces[locate(L)];
    return p.point(L - p.start);
  }
  Vector tangent(double L) const {
    if (L >= total) return end_direction;
    const PathPiece& p = pieces[locate(L)];
    return p.tangent(L - p.start);
  }
};

void append_piece(ChordPath& path, PathPiece piece) {
  piece.start = path.total;
  path.total += piece.length;
  path.pieces.push_back(std::move(piece));
}

}  // namespace

ChordFixture smoothed_chord_curve(const PointSchedule& schedule) {
  const std::size_t K = schedule.times.size();
  if (K < 3 || schedule.points.size() != K)
    throw std::invalid_argument("smoothed_chord_curve: need >= 3 scheduled points");
  const Eigen::Index dim = schedule.points[0].size();
  for (std::size_t n = 0; n < K; ++n) {
    if (!(schedule.times[n] > 0.0 && schedule.times[n] < 1.0))
      throw std::invalid_argument("smoothed_chord_curve: times must lie in ]0, 1[");
    if (n > 0 && !(schedule.times[n] < schedule.times[n - 1]))
      throw std::invalid_argument("smoothed_chord_curve: times must decrease strictly");
    if (schedule.points[n].size() != dim || !all_finite(schedule.points[n]))
      throw std::invalid_argument("smoothed_chord_curve: bad scheduled point");
  }

  ChordFixture fixture;
  const double t_top = schedule.times[0];
  bool all_zero = true;
  for (const Vector& p : schedule.points) all_zero = all_zero && p.isZero(0.0);
  if (all_zero) {
    fixture.node_times = schedule.times;
    fixture.curve.domain = {-1.0, 1.0, true};
    fixture.curve.dim = static_cast<int>(dim);
    fixture.curve.kind = CurveKind::piecewise;
    fixture.curve.eval = [dim](double) { return Vector(Vector::Zero(dim)); };
    fixture.curve.deriv = fixture.curve.eval;
    return fixture;
  }

  // vertices[0] is the origin, vertices[K] = s_0 (the largest time).
  std::vector<Vector> vertices{Vector::Zero(dim)};
  for (std::size_t n = K; n-- > 0;) vertices.push_back(schedule.points[n]);
  const std::size_t chords = vertices.size() - 1;
  std::vector<Vector> dir(chords);
  std::vector<double> len(chords);
  for (std::size_t i = 0; i < chords; ++i) {
    const Vector delta = vertices[i + 1] - vertices[i];
    len[i] = delta.norm();
    if (!(len[i] > 0.0)) throw ScheduleOverlap("smoothed_chord_curve: zero-length chord");
    dir[i] = delta / len[i];
  }
  // Rounding radius at each interior vertex; 0 at the two ends.
  std::vector<double> radius(vertices.size(), 0.0);
  std::vector<Vector> bisector(vertices.size());
  for (std::size_t i = 1; i < chords; ++i) {
    radius[i] = std::min(len[i - 1], len[i]) / 4;
    const Vector sum = dir[i - 1] + dir[i];
    if (sum.norm() < 1e-6)
      throw ScheduleOverlap("smoothed_chord_curve: chords fold back onto each other");
    bisector[i] = sum.normalized();
  }

  auto path = std::make_shared<ChordPath>();
  std::vector<double> vertex_length(vertices.size(), 0.0);
  for (std::size_t i = 0; i < chords; ++i) {
    PathPiece line;
    line.a = vertices[i] + radius[i] * dir[i];
    line.b = vertices[i + 1] - radius[i + 1] * dir[i];
    line.length = (line.b - line.a).norm();
    append_piece(*path, line);
    const std::size_t v = i + 1;
    if (v == chords) {
      vertex_length[v] = path->total;
      break;
    }
    const double rho = radius[v];
    PathPiece in;
    in.straight = false;
    in.quintic = {line.b, rho * dir[i], rho * bisector[v], vertices[v]};
    in.length = in.quintic.arc_length(1.0);
    append_piece(*path, in);
    vertex_length[v] = path->total;
    PathPiece out;
    out.straight = false;
    out.quintic = {vertices[v], rho * bisector[v], rho * dir[v],
                   Vector(vertices[v] + rho * dir[v])};
    out.length = out.quintic.arc_length(1.0);
    append_piece(*path, out);
  }
  path->end_point = vertices.back();
  path->end_direction = dir.back();

  const double total = path->total;
  fixture.total_length = total;
  fixture.node_times.resize(K);
  for (std::size_t n = 0; n < K; ++n) {
    const double lambda = vertex_length[K - n];
    fixture.node_times[n] = n == 0 ? t_top : t_top * std::cbrt(lambda / total);
  }

  Curve& c = fixture.curve;
  c.domain = {-1.0, 1.0, true};
  c.dim = static_cast<int>(dim);
  c.kind = CurveKind::piecewise;
  c.smoothness = 1;
  c.eval = [path, total, t_top, dim](double t) -> Vector {
    if (t <= 0.0) return Vector::Zero(dim);
    const double r = t / t_top;
    return path->point(total * r * r * r);
  };
  c.deriv = [path, total, t_top, dim](double t) -> Vector {
    if (t <= 0.0) return Vector::Zero(dim);
    const double r = t / t_top;
    return (3.0 * total * r * r / t_top) * path->tangent(total * r * r * r);
  };
  return fixture;
}

// ---------------------------------------------------------------------------
// Figure eight and pullback probe

Vector figure_eight(double t) { return Eigen::Vector2d(std::sin(2 * t), std::sin(t)); }

Curve figure_eight_curve() {
  Curve c;
  c.domain = {-std::numbers::pi, std::numbers::pi, true};
  c.dim = 2;
  c.kind = CurveKind::analytic;
  c.smoothness = 3;
  c.eval = [](double t) { return figure_eight(t); };
  c.deriv = [](double t) -> Vector { return Eigen::Vector2d(2 * std::cos(2 * t), std::cos(t)); };
  return c;
}

Curve figure_eight_branch_crossing(double half_width) {
  Curve c;
  c.domain = {-half_width, half_width, false};
  c.dim = 2;
  c.kind = CurveKind::analytic;
  c.smoothness = 3;
  c.eval = [](double s) -> Vector { return Eigen::Vector2d(-std::sin(2 * s), std::sin(s)); };
  c.deriv = [](double s) -> Vector {
    return Eigen::Vector2d(-2 * std::cos(2 * s), std::cos(s));
  };
  return c;
}

PullbackReport pullback_continuity_probe(const Curve& immersion, const Curve& test_curve,
                                         std::span<const double> grid,
                                         const PullbackOptions& options) {
  if (grid.size() < 2) throw std::invalid_argument("pullback probe: grid needs 2 points");
  double lo = immersion.domain.lo;
  double hi = immersion.domain.hi;
  if (immersion.domain.open) {
    const double margin = options.boundary_margin * (hi - lo);
    lo += margin;
    hi -= margin;
  }
  const std::vector<double> search = linspace(lo, hi, options.search_points);
  std::vector<Vector> image(search.size());
  for (std::size_t k = 0; k < search.size(); ++k) image[k] = immersion(search[k]);

  auto distance = [&](double tau, const Vector& p) { return (immersion(tau) - p).norm(); };
  auto polish = [&](double tau, const Vector& p) {
    for (int it = 0; it < 8; ++it) {
      const Vector d = immersion.derivative(tau);
      const double step = (immersion(tau) - p).dot(d) / d.squaredNorm();
      tau = std::clamp(tau - step, lo, hi);
      if (std::abs(step) < 1e-17) break;
    }
    return tau;
  };

  PullbackReport report;
  report.parameters.reserve(grid.size());
  report.distances.reserve(grid.size());
  for (double s : grid) {
    const Vector p = test_curve(s);
    std::vector<double> dist(search.size());
    for (std::size_t k = 0; k < search.size(); ++k) dist[k] = (image[k] - p).norm();
    // Local minima of the sampled distance, best first.
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k < search.size(); ++k) {
      const bool left = k == 0 || dist[k] <= dist[k - 1];
      const bool right = k + 1 == search.size() || dist[k] <= dist[k + 1];
      if (left && right) candidates.push_back(k);
    }
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    if (candidates.size() > 4) candidates.resize(4);

    double best_tau = search[candidates.front()];
    double best_dist = dist[candidates.front()];
    for (std::size_t k : candidates) {
      const double a = search[k == 0 ? 0 : k - 1];
      const double b = search[std::min(k + 1, search.size() - 1)];
      auto [tau, f] = boost::math::tools::brent_find_minima(
          [&](double u) { return distance(u, p); }, a, b, 52);
      tau = polish(tau, p);
      const double d = distance(tau, p);
      if (d < best_dist) {
        best_dist = d;
        best_tau = tau;
      }
    }
    if (!(best_dist <= options.image_tolerance)) {
      std::ostringstream os;
      os.precision(17);
      os << "pullback probe: sample at s=" << s << " is " << best_dist
         << " away from the immersion image";
      throw NotInImage(os.str());
    }
    report.parameters.push_back(best_tau);
    report.distances.push_back(best_dist);
  }

  double worst_ratio = -1.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double moved = (test_curve(grid[i + 1]) - test_curve(grid[i])).norm();
    const double speed = immersion.derivative(report.parameters[i]).norm();
    const double expected = moved / std::max(speed, 1e-300);
    const double threshold = options.jump_factor * expected + 1e-12;
    const double gap = std::abs(report.parameters[i + 1] - report.parameters[i]);
    if (gap > threshold) report.continuous = false;
    const double ratio = gap / threshold;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      report.jump_at = grid[i];
      report.gap = gap;
      report.threshold = threshold;
    }
  }
  return report;
}

}  // namespace orbitlift
