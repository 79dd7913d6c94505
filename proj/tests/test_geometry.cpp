#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pmfht/geometry.hpp"
#include "support/clouds.hpp"
#include "support/oracles.hpp"

using namespace pmfht;
using namespace pmfht::testing;

namespace {

detail::Polygon unit_square() {
  return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
}

double polygon_area(const detail::Polygon& poly) {
  std::vector<std::array<double, 2>> pts;
  for (const auto& v : poly) pts.push_back({v.x(), v.y()});
  return shoelace_area(pts);
}

// Grid-sampled area of (convex polygon) intersect (disk of given radius at
// the origin); independent of the circular-segment decomposition under test.
double grid_poly_disk_area(const detail::Polygon& poly, double radius, int grid = 2500) {
  double lo_x = poly[0].x(), hi_x = lo_x, lo_y = poly[0].y(), hi_y = lo_y;
  for (const auto& v : poly) {
    lo_x = std::min(lo_x, v.x());
    hi_x = std::max(hi_x, v.x());
    lo_y = std::min(lo_y, v.y());
    hi_y = std::max(hi_y, v.y());
  }
  lo_x = std::max(lo_x, -radius);
  hi_x = std::min(hi_x, radius);
  lo_y = std::max(lo_y, -radius);
  hi_y = std::min(hi_y, radius);
  if (lo_x >= hi_x || lo_y >= hi_y) return 0.0;
  const double dx = (hi_x - lo_x) / grid;
  const double dy = (hi_y - lo_y) / grid;
  const int m = static_cast<int>(poly.size());
  long inside = 0;
  for (int i = 0; i < grid; ++i) {
    const double x = lo_x + (i + 0.5) * dx;
    for (int j = 0; j < grid; ++j) {
      const double y = lo_y + (j + 0.5) * dy;
      if (x * x + y * y > radius * radius) continue;
      bool in = true;
      for (int e = 0; e < m; ++e) {
        const auto& a = poly[e];
        const auto& b = poly[(e + 1) % m];
        if ((b.x() - a.x()) * (y - a.y()) - (b.y() - a.y()) * (x - a.x()) < 0.0) {
          in = false;
          break;
        }
      }
      if (in) ++inside;
    }
  }
  return static_cast<double>(inside) * dx * dy;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("half-plane clip keeps the inside of a square") {
  const auto clipped = detail::clip_half_plane(unit_square(), {1.0, 0.0}, 0.5);
  CHECK(clipped.size() == 4);
  CHECK(polygon_area(clipped) == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& v : clipped) CHECK(v.x() <= 0.5 + 1e-15);
}

TEST_CASE("half-plane clip can empty the polygon") {
  const auto clipped = detail::clip_half_plane(unit_square(), {1.0, 0.0}, -1.0);
  CHECK(clipped.empty());
}

TEST_CASE("repeated clips commute with intersection") {
  auto poly = unit_square();
  poly = detail::clip_half_plane(poly, {1.0, 0.0}, 0.75);
  poly = detail::clip_half_plane(poly, {0.0, 1.0}, 0.25);
  CHECK(polygon_area(poly) == doctest::Approx(0.75 * 0.25).epsilon(1e-12));
}

TEST_CASE("disk clip: polygon strictly inside the disk") {
  detail::Polygon tri{{-0.2, -0.1}, {0.3, -0.1}, {0.0, 0.25}};
  const double exact = polygon_area(tri);
  CHECK(detail::disk_clipped_area(tri, 10.0) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("disk clip: disk strictly inside the polygon") {
  detail::Polygon big{{-5.0, -5.0}, {5.0, -5.0}, {5.0, 5.0}, {-5.0, 5.0}};
  CHECK(detail::disk_clipped_area(big, 1.25) ==
        doctest::Approx(std::numbers::pi * 1.25 * 1.25).epsilon(1e-12));
}

TEST_CASE("disk clip: quarter-disk overlap") {
  detail::Polygon quad{{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}};
  CHECK(detail::disk_clipped_area(quad, 1.0) ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-12));
}

TEST_CASE("disk clip matches grid sampling on random convex polygons") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uradius(0.4, 1.6);
  std::uniform_real_distribution<double> ushift(-0.5, 0.5);
  for (int trial = 0; trial < 8; ++trial) {
    // convex polygon inscribed in a random ellipse, shifted off-center
    const double a = uradius(rng), b = uradius(rng);
    const double cx = ushift(rng), cy = ushift(rng);
    const int k = 5 + trial % 4;
    detail::Polygon poly;
    for (int i = 0; i < k; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / k;
      poly.push_back({cx + a * std::cos(phi), cy + b * std::sin(phi)});
    }
    const double radius = uradius(rng);
    const double exact = detail::disk_clipped_area(poly, radius);
    const double sampled = grid_poly_disk_area(poly, radius);
    CHECK(exact == doctest::Approx(sampled).epsilon(5e-3));
  }
}

TEST_CASE("radius and k-nearest neighbor queries") {
  PointCloud cloud;
  cloud.pts.resize(5, 3);
  cloud.pts << 0, 0, 0, /**/ 1, 0, 0, /**/ 2, 0, 0, /**/ 0, 3, 0, /**/ 0, 0, 5;

  const auto ball = detail::radius_neighbors(cloud, 0, 2.0);
  CHECK(ball == std::vector<int>{1, 2});

  const auto nearest = detail::k_nearest_neighbors(cloud, 0, 3);
  CHECK(nearest == std::vector<int>{1, 2, 3});

  // tie between indices 1 and 2 resolves to the lower index
  const auto one = detail::k_nearest_neighbors(cloud, 1, 1);
  CHECK(one == std::vector<int>{0});
}

TEST_CASE("mean nearest-neighbor distance of a grid is the spacing") {
  CHECK(mean_nn_distance(planar_grid(6, 6, 0.25)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("parameter resolution fills zeros from the spacing") {
  const PointCloud cloud = planar_grid(5, 5, 2.0);
  const LboParams p = resolve_lbo_params(cloud, {});
  CHECK(p.t == doctest::Approx(1.0));            // dbar^2 / 4
  CHECK(p.r_neighbor == doctest::Approx(6.0));   // 3 dbar
  CHECK(p.delta == doctest::Approx(6.0));        // 3 dbar
  CHECK(p.k_fallback == 8);

  LboParams keep;
  keep.t = 0.5;
  keep.r_neighbor = 1.0;
  keep.delta = 3.0;
  const LboParams q = resolve_lbo_params(cloud, keep);
  CHECK(q.t == 0.5);
  CHECK(q.r_neighbor == 1.0);
  CHECK(q.delta == 3.0);
}

TEST_CASE("parameter validation") {
  const PointCloud cloud = planar_grid(5, 5, 1.0);
  LboParams neg;
  neg.t = -1.0;
  CHECK_THROWS_AS(resolve_lbo_params(cloud, neg), InvalidArgument);
  LboParams inverted;
  inverted.r_neighbor = 2.0;
  inverted.delta = 1.0;
  CHECK_THROWS_AS(resolve_lbo_params(cloud, inverted), InvalidArgument);
  LboParams few;
  few.k_fallback = 2;
  CHECK_THROWS_AS(resolve_lbo_params(cloud, few), InvalidArgument);
}

TEST_CASE("clouds that are too small or non-finite are rejected") {
  PointCloud tiny;
  tiny.pts.resize(3, 3);
  tiny.pts.setRandom();
  CHECK_THROWS_AS(mean_nn_distance(tiny), InvalidArgument);

  PointCloud bad = planar_grid(4, 4, 1.0);
  bad.pts(2, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(mean_nn_distance(bad), InvalidArgument);
}

TEST_CASE("tangent frame of a planar patch has a vertical normal") {
  const PointCloud cloud = planar_grid(7, 7, 1.0);
  const LboParams p = resolve_lbo_params(cloud, {});
  const TangentFrame frame = estimate_tangent_frame(cloud, 3 * 7 + 3, p);
  CHECK(std::abs(frame.normal.z()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(frame.normal.z() > 0.0);  // deterministic sign
  CHECK(std::abs(frame.u.z()) < 1e-12);
  CHECK(std::abs(frame.v.z()) < 1e-12);
  CHECK(frame.u.dot(frame.v) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("tangent frame on a sphere is nearly radial") {
  const PointCloud cloud = fibonacci_sphere(500);
  const LboParams p = resolve_lbo_params(cloud, {});
  for (int index : {0, 123, 250, 499}) {
    const TangentFrame frame = estimate_tangent_frame(cloud, index, p);
    const Eigen::Vector3d radial = cloud.point(index).normalized();
    CHECK(std::abs(frame.normal.dot(radial)) > 0.99);
  }
}

TEST_CASE("collinear neighborhoods are degenerate") {
  PointCloud line;
  line.pts.resize(6, 3);
  for (int i = 0; i < 6; ++i) line.pts.row(i) << i, 0.0, 0.0;
  const LboParams p = resolve_lbo_params(line, {});
  CHECK_THROWS_AS(estimate_tangent_frame(line, 2, p), DegenerateNeighborhood);
}

TEST_CASE("interior grid cell area is the squared spacing") {
  const double h = 0.7;
  const PointCloud cloud = planar_grid(9, 9, h);
  const LboParams p = resolve_lbo_params(cloud, {});
  const int center = 4 * 9 + 4;
  const TangentFrame frame = estimate_tangent_frame(cloud, center, p);
  CHECK(voronoi_cell_area(cloud, center, frame, p) == doctest::Approx(h * h).epsilon(1e-10));
}

TEST_CASE("interior hex cell is a regular hexagon") {
  const double s = 1.3;
  const PointCloud cloud = hex_patch(4, s);
  const LboParams p = resolve_lbo_params(cloud, {});
  const TangentFrame frame = estimate_tangent_frame(cloud, 0, p);
  const double hexagon = std::sqrt(3.0) / 2.0 * s * s;
  CHECK(voronoi_cell_area(cloud, 0, frame, p) == doctest::Approx(hexagon).epsilon(1e-10));
}

TEST_CASE("cell areas match grid-sampled Voronoi areas") {
  const PointCloud cloud = random_planar_disk(40, 11);
  const LboParams p = resolve_lbo_params(cloud, {});
  for (int index : {0, 7, 19, 33}) {
    const TangentFrame frame = estimate_tangent_frame(cloud, index, p);
    const double area = voronoi_cell_area(cloud, index, frame, p);

    // The projection is an in-plane rotation for a planar cloud, so raw x, y
    // offsets describe the same cell.
    auto nbrs = detail::radius_neighbors(cloud, index, p.delta);
    if (nbrs.size() < 3) nbrs = detail::k_nearest_neighbors(cloud, index, p.k_fallback);
    Eigen::Matrix<double, Eigen::Dynamic, 2> sites(nbrs.size() + 1, 2);
    sites.row(0) << 0.0, 0.0;
    for (size_t j = 0; j < nbrs.size(); ++j) {
      sites.row(static_cast<Eigen::Index>(j) + 1) =
          (cloud.point(nbrs[j]) - cloud.point(index)).head<2>().transpose();
    }
    const double sampled = voronoi_disk_area_grid(sites, 0, p.delta);
    CHECK(area == doctest::Approx(sampled).epsilon(1e-2));
  }
}

TEST_CASE("operator assembly invariants") {
  const PointCloud cloud = random_planar_disk(36, 3);
  const LboPair lbo = build_lbo(cloud);
  const int n = cloud.size();

  CHECK((lbo.Q - lbo.Q.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((lbo.b.array() > 0.0).all());
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(lbo.Q.row(i).sum()) < 1e-12 * lbo.Q.cwiseAbs().maxCoeff());
    CHECK(lbo.Q(i, i) <= 0.0);
    for (int j = 0; j < n; ++j) {
      if (i != j) CHECK(lbo.Q(i, j) >= 0.0);
    }
  }
}

TEST_CASE("truncation radius zeroes distant couplings") {
  PointCloud cloud = planar_grid(5, 5, 1.0);
  cloud.pts(24, 0) += 100.0;  // push one corner far away
  LboParams p;
  p.t = 0.25;
  p.r_neighbor = 3.0;
  p.delta = 3.0;
  p.k_fallback = 8;
  const LboPair lbo = build_lbo(cloud, p);
  for (int j = 0; j < 24; ++j) CHECK(lbo.Q(24, j) == 0.0);
}

TEST_CASE("harmonic basis agrees with a generalized eigensolver") {
  const PointCloud cloud = random_planar_disk(30, 5);
  const LboPair lbo = build_lbo(cloud);
  const HarmonicBasis basis = solve_harmonic_basis(lbo);
  const GeneralizedEigen oracle = generalized_eigs(lbo.Q, lbo.b);

  REQUIRE(basis.eigenvalues.size() == oracle.eigenvalues.size());
  const double scale = std::max(1.0, oracle.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < basis.eigenvalues.size(); ++k) {
    CHECK(std::abs(basis.eigenvalues(k) - oracle.eigenvalues(k)) < 1e-8 * scale);
  }
}

TEST_CASE("harmonic basis satisfies the pencil equation") {
  const PointCloud cloud = random_planar_disk(28, 9);
  const LboPair lbo = build_lbo(cloud);
  const HarmonicBasis basis = solve_harmonic_basis(lbo);
  const double scale = lbo.Q.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < basis.eigenvalues.size(); ++k) {
    const Vec residual = lbo.Q * basis.H.col(k) +
                         basis.eigenvalues(k) * (lbo.b.asDiagonal() * basis.H.col(k));
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-9 * std::max(scale, 1.0));
  }
  CHECK(std::abs(basis.eigenvalues(0)) < 1e-9 * std::max(scale, 1.0));
  CHECK((basis.eigenvalues.array() > -1e-9 * std::max(scale, 1.0)).all());
}

TEST_CASE("harmonic basis is B-orthonormal with fixed signs") {
  const PointCloud cloud = random_planar_disk(26, 13);
  const LboPair lbo = build_lbo(cloud);
  const HarmonicBasis basis = solve_harmonic_basis(lbo);

  const Mat gram = basis.H.transpose() * lbo.b.asDiagonal() * basis.H;
  CHECK((gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-10);

  for (Eigen::Index k = 0; k < basis.H.cols(); ++k) {
    Eigen::Index arg = 0;
    basis.H.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(basis.H(arg, k) > 0.0);
  }
}

TEST_CASE("sphere eigenvalues land on the Laplacian shells") {
  // Unit sphere: -Laplacian eigenvalues l(l+1) with multiplicity 2l+1, so
  // the leading shells are 0, then 2, 2, 2, then 6 five-fold.
  const PointCloud cloud = fibonacci_sphere(2000);
  const LboPair lbo = build_lbo(cloud);
  const HarmonicBasis basis = solve_harmonic_basis(lbo);

  CHECK(std::abs(basis.eigenvalues(0)) < 0.15 * 2.0);
  for (int k = 1; k <= 3; ++k) {
    CHECK(basis.eigenvalues(k) == doctest::Approx(2.0).epsilon(0.15));
  }
  for (int k = 4; k <= 8; ++k) {
    CHECK(basis.eigenvalues(k) == doctest::Approx(6.0).epsilon(0.15));
  }
}

}  // TEST_SUITE
