#include "pmfht/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pmfht {

namespace detail {

std::vector<int> radius_neighbors(const PointCloud& cloud, int index, double radius) {
  const int n = cloud.size();
  const double r2 = radius * radius;
  const Eigen::Vector3d p = cloud.point(index);
  std::vector<int> out;
  for (int j = 0; j < n; ++j) {
    if (j == index) continue;
    if ((cloud.point(j) - p).squaredNorm() <= r2) out.push_back(j);
  }
  return out;
}

std::vector<int> k_nearest_neighbors(const PointCloud& cloud, int index, int k) {
  const int n = cloud.size();
  const Eigen::Vector3d p = cloud.point(index);
  std::vector<std::pair<double, int>> dist;
  dist.reserve(n - 1);
  for (int j = 0; j < n; ++j) {
    if (j == index) continue;
    dist.emplace_back((cloud.point(j) - p).squaredNorm(), j);
  }
  const int take = std::min<int>(k, static_cast<int>(dist.size()));
  std::partial_sort(dist.begin(), dist.begin() + take, dist.end());
  std::vector<int> out(take);
  for (int i = 0; i < take; ++i) out[i] = dist[i].second;
  return out;
}

Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& n, double c) {
  Polygon out;
  const int m = static_cast<int>(poly.size());
  if (m == 0) return out;
  out.reserve(m + 1);
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d& b = poly[(i + 1) % m];
    const double da = n.dot(a) - c;
    const double db = n.dot(b) - c;
    const bool ain = da <= 0.0;
    const bool bin = db <= 0.0;
    if (ain) out.push_back(a);
    if (ain != bin) {
      const double t = da / (da - db);  // da, db have opposite signs here
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

namespace {

// Signed area of the circular sector swept from direction a to direction b.
double sector_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius) {
  const double cross = a.x() * b.y() - a.y() * b.x();
  const double angle = std::atan2(cross, a.dot(b));
  return 0.5 * radius * radius * angle;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Signed area of triangle (origin, a, b) intersected with the disk. The
// polygon boundary is traversed CCW and contains the origin, so summing
// these contributions over all edges yields the clipped area.
double edge_contribution(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double radius) {
  const double r2 = radius * radius;
  const bool ain = a.squaredNorm() <= r2;
  const bool bin = b.squaredNorm() <= r2;
  if (ain && bin) return 0.5 * cross2(a, b);

  // Chord intersections: |a + t (b - a)|^2 = r^2.
  const Eigen::Vector2d d = b - a;
  const double A = d.squaredNorm();
  const double B = 2.0 * a.dot(d);
  const double C = a.squaredNorm() - r2;
  const double disc = B * B - 4.0 * A * C;

  if (ain) {  // leaves the disk at t2
    const double t2 = (-B + std::sqrt(std::max(disc, 0.0))) / (2.0 * A);
    const Eigen::Vector2d p = a + t2 * d;
    return 0.5 * cross2(a, p) + sector_area(p, b, radius);
  }
  if (bin) {  // enters the disk at t1
    const double t1 = (-B - std::sqrt(std::max(disc, 0.0))) / (2.0 * A);
    const Eigen::Vector2d p = a + t1 * d;
    return sector_area(a, p, radius) + 0.5 * cross2(p, b);
  }
  if (disc > 0.0) {  // both outside; the chord may pass through the disk
    const double sq = std::sqrt(disc);
    const double t1 = (-B - sq) / (2.0 * A);
    const double t2 = (-B + sq) / (2.0 * A);
    if (t1 > 0.0 && t2 < 1.0 && t1 < t2) {
      const Eigen::Vector2d p1 = a + t1 * d;
      const Eigen::Vector2d p2 = a + t2 * d;
      return sector_area(a, p1, radius) + 0.5 * cross2(p1, p2) + sector_area(p2, b, radius);
    }
  }
  return sector_area(a, b, radius);
}

}  // namespace

double disk_clipped_area(const Polygon& poly, double radius) {
  const int m = static_cast<int>(poly.size());
  if (m < 3) return 0.0;
  double area = 0.0;
  for (int i = 0; i < m; ++i) {
    area += edge_contribution(poly[i], poly[(i + 1) % m], radius);
  }
  return area;
}

}  // namespace detail

double mean_nn_distance(const PointCloud& cloud) {
  validate_cloud(cloud);
  const int n = cloud.size();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d p = cloud.point(i);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (cloud.point(j) - p).squaredNorm());
    }
    sum += std::sqrt(best);
  }
  return sum / n;
}

LboParams resolve_lbo_params(const PointCloud& cloud, LboParams params) {
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  if (bad(params.t) || bad(params.r_neighbor) || bad(params.delta)) {
    throw InvalidArgument("LBO parameters must be finite and non-negative");
  }
  if (params.k_fallback < 3) {
    throw InvalidArgument("k_fallback must be at least 3");
  }
  if (params.t == 0.0 || params.r_neighbor == 0.0 || params.delta == 0.0) {
    const double dbar = mean_nn_distance(cloud);
    if (!(dbar > 0.0)) throw DegenerateNeighborhood("cloud has coincident points everywhere");
    if (params.t == 0.0) params.t = dbar * dbar / 4.0;
    if (params.r_neighbor == 0.0) params.r_neighbor = 3.0 * dbar;
    if (params.delta == 0.0) params.delta = 3.0 * dbar;
  }
  if (params.delta < params.r_neighbor) {
    throw InvalidArgument("delta must be >= r_neighbor");
  }
  return params;
}

namespace {

// Deterministic sign convention for a unit vector: the entry of largest
// magnitude (lowest index on ties) is made positive.
Eigen::Vector3d fix_sign(Eigen::Vector3d v) {
  int arg = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
  }
  if (v(arg) < 0.0) v = -v;
  return v;
}

}  // namespace

TangentFrame estimate_tangent_frame(const PointCloud& cloud, int index, const LboParams& params) {
  validate_cloud(cloud);
  if (index < 0 || index >= cloud.size()) {
    throw IndexOutOfRange("tangent frame index " + std::to_string(index));
  }
  std::vector<int> nbrs = detail::radius_neighbors(cloud, index, params.r_neighbor);
  if (static_cast<int>(nbrs.size()) < 3) {
    nbrs = detail::k_nearest_neighbors(cloud, index, params.k_fallback);
  }
  if (nbrs.size() < 2) {
    throw DegenerateNeighborhood("point " + std::to_string(index) + ": fewer than 3 points");
  }

  const Eigen::Vector3d p = cloud.point(index);
  Eigen::Vector3d centroid = p;
  for (int j : nbrs) centroid += cloud.point(j);
  centroid /= static_cast<double>(nbrs.size() + 1);

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  {
    const Eigen::Vector3d d = p - centroid;
    cov += d * d.transpose();
  }
  for (int j : nbrs) {
    const Eigen::Vector3d d = cloud.point(j) - centroid;
    cov += d * d.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  if (es.info() != Eigen::Success) {
    throw EigensolveFailure("3x3 covariance eigensolve at point " + std::to_string(index));
  }
  const Eigen::Vector3d evals = es.eigenvalues();  // ascending
  if (!(evals(2) > 0.0) || evals(1) <= 1e-12 * evals(2)) {
    throw DegenerateNeighborhood("point " + std::to_string(index) +
                                 ": neighborhood is collinear or coincident");
  }

  TangentFrame frame;
  frame.origin = p;
  frame.u = fix_sign(es.eigenvectors().col(2));
  frame.v = fix_sign(es.eigenvectors().col(1));
  frame.normal = fix_sign(es.eigenvectors().col(0));
  return frame;
}

double voronoi_cell_area(const PointCloud& cloud, int index, const TangentFrame& frame,
                         const LboParams& params) {
  validate_cloud(cloud);
  if (index < 0 || index >= cloud.size()) {
    throw IndexOutOfRange("voronoi cell index " + std::to_string(index));
  }
  const double delta = params.delta;

  // Project a neighborhood into the tangent plane; the center sits at the
  // origin of its own cell.
  const double coincident = 1e-12 * delta;
  auto project = [&](const std::vector<int>& nbrs) {
    std::vector<Eigen::Vector2d> sites;
    sites.reserve(nbrs.size());
    for (int j : nbrs) {
      const Eigen::Vector3d d = cloud.point(j) - frame.origin;
      const Eigen::Vector2d s(d.dot(frame.u), d.dot(frame.v));
      if (s.norm() > coincident) sites.push_back(s);
    }
    return sites;
  };

  // Sparse delta-balls (boundary points) fall back to the k nearest sites;
  // the cell stays clipped to the delta-disk either way.
  std::vector<Eigen::Vector2d> sites = project(detail::radius_neighbors(cloud, index, delta));
  if (sites.size() < 3) {
    sites = project(detail::k_nearest_neighbors(cloud, index, params.k_fallback));
  }
  if (sites.size() < 3) {
    throw DegenerateNeighborhood("point " + std::to_string(index) + ": only " +
                                 std::to_string(sites.size()) +
                                 " distinct projected neighbors");
  }

  // Bounding square strictly containing the delta-disk, cut by the
  // perpendicular bisector of each projected site.
  const double w = 2.0 * delta;
  detail::Polygon poly{{-w, -w}, {w, -w}, {w, w}, {-w, w}};
  for (const Eigen::Vector2d& s : sites) {
    poly = detail::clip_half_plane(poly, s, 0.5 * s.squaredNorm());
    if (poly.size() < 3) break;
  }

  const double area = detail::disk_clipped_area(poly, delta);
  if (!(area > 0.0) || !std::isfinite(area)) {
    throw NonPositiveArea("point " + std::to_string(index) + ": cell area " +
                          std::to_string(area));
  }
  return area;
}

LboPair build_lbo(const PointCloud& cloud, LboParams params) {
  validate_cloud(cloud);
  params = resolve_lbo_params(cloud, params);
  const int n = cloud.size();

  Vec b(n);
  for (int i = 0; i < n; ++i) {
    const TangentFrame frame = estimate_tangent_frame(cloud, i, params);
    b(i) = voronoi_cell_area(cloud, i, frame, params);
  }
  if (!b.allFinite() || (b.array() <= 0.0).any()) {
    throw NonPositiveArea("mass diagonal has a non-positive entry");
  }

  const double scale = 1.0 / (4.0 * std::numbers::pi * params.t * params.t);
  const double d2max = params.delta * params.delta;
  Mat Q = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d p = cloud.point(i);
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (cloud.point(j) - p).squaredNorm();
      if (d2 <= d2max) {
        const double w = b(i) * b(j) * scale * std::exp(-d2 / (4.0 * params.t));
        Q(i, j) = w;
        Q(j, i) = w;
      }
    }
  }
  Q = 0.5 * (Q + Q.transpose()).eval();  // symmetry enforced before the diagonal
  for (int i = 0; i < n; ++i) {
    Q(i, i) = 0.0;
    Q(i, i) = -Q.row(i).sum();
  }
  return LboPair{std::move(Q), std::move(b)};
}

HarmonicBasis solve_harmonic_basis(const LboPair& lbo) {
  const int n = static_cast<int>(lbo.Q.rows());
  if (lbo.Q.cols() != n || lbo.b.size() != n) {
    throw DimensionMismatch("LBO pair shapes disagree");
  }
  if ((lbo.b.array() <= 0.0).any()) {
    throw InvalidArgument("mass diagonal must be positive");
  }

  const Vec s = lbo.b.array().sqrt().inverse().matrix();  // B^{-1/2}
  Mat C = s.asDiagonal() * (-lbo.Q) * s.asDiagonal();
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  if (es.info() != Eigen::Success) {
    throw EigensolveFailure("symmetric eigensolve of the reduced operator");
  }

  HarmonicBasis basis;
  basis.eigenvalues = es.eigenvalues();
  basis.H = s.asDiagonal() * es.eigenvectors();
  for (int k = 0; k < n; ++k) {
    int arg = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(basis.H(i, k)) > std::abs(basis.H(arg, k))) arg = i;
    }
    if (basis.H(arg, k) < 0.0) basis.H.col(k) = -basis.H.col(k);
  }
  return basis;
}

}  // namespace pmfht
