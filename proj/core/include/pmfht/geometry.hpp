#pragma once

#include <vector>

#include "pmfht/types.hpp"

namespace pmfht {

/// Parameters of the heat-kernel graph Laplacian. Any field left at zero is
/// resolved from the mean nearest-neighbor spacing dbar of the cloud:
///   t = dbar^2 / 4,  r_neighbor = 3 dbar,  delta = 3 dbar.
struct LboParams {
  double t = 0.0;           // heat kernel time scale
  double r_neighbor = 0.0;  // radius of the tangent-plane fitting ball
  double delta = 0.0;       // kernel truncation radius; also clips Voronoi cells
  int k_fallback = 8;       // neighbor count when the r-ball is too thin
};

/// Orthonormal tangent frame at one sample point. `normal` is the direction
/// of least variance of the fitting neighborhood.
struct TangentFrame {
  Eigen::Vector3d origin;
  Eigen::Vector3d u;
  Eigen::Vector3d v;
  Eigen::Vector3d normal;
};

/// Stiffness/mass pair of the discrete Laplace-Beltrami operator.
/// Q is symmetric with zero row sums, off-diagonal entries >= 0 and
/// diagonal <= 0; b holds the positive Voronoi cell areas (diagonal of B).
struct LboPair {
  Mat Q;
  Vec b;
};

/// Generalized eigenpairs of Q H = -lambda B H, eigenvalues ascending.
/// Columns of H are B-orthonormal: H^T B H = I.
struct HarmonicBasis {
  Vec eigenvalues;
  Mat H;
};

/// Mean over all points of the distance to the nearest other point.
double mean_nn_distance(const PointCloud& cloud);

/// Returns a copy of `params` with zero fields filled from the cloud spacing.
/// Throws InvalidArgument for negative or non-finite explicit values, or
/// k_fallback < 3, or delta < r_neighbor after resolution.
LboParams resolve_lbo_params(const PointCloud& cloud, LboParams params);

/// Best-fit tangent plane of the r-neighborhood of point `index` (the point
/// itself included). Falls back to the k_fallback nearest neighbors when the
/// ball contains fewer than 3 other points. Throws DegenerateNeighborhood
/// when the neighborhood is collinear or coincident.
TangentFrame estimate_tangent_frame(const PointCloud& cloud, int index, const LboParams& params);

/// Area of the 2D Voronoi cell of point `index` among its delta-neighbors
/// projected onto `frame`, clipped to the disk of radius delta. Thin
/// delta-balls fall back to the k_fallback nearest sites (the disk clip is
/// unchanged). Throws DegenerateNeighborhood when fewer than 3 projected
/// neighbors are distinct from the center even after the fallback.
double voronoi_cell_area(const PointCloud& cloud, int index, const TangentFrame& frame,
                         const LboParams& params);

/// Assembles the heat-kernel pair over the cloud:
///   q_ij = b_i b_j / (4 pi t^2) exp(-|p_i - p_j|^2 / (4t))   for |p_i-p_j| <= delta,
/// zero beyond truncation, diagonal set to the negated row sum after explicit
/// symmetrization of the off-diagonal part. b_i is the Voronoi cell area.
LboPair build_lbo(const PointCloud& cloud, LboParams params = {});

/// Dense solve of Q H = -lambda B H via the symmetric reduction
/// B^{-1/2} (-Q) B^{-1/2}. Eigenvector signs are fixed: the entry of largest
/// magnitude in each column is made positive (ties broken by lowest index).
HarmonicBasis solve_harmonic_basis(const LboPair& lbo);

namespace detail {

/// Convex polygon as a CCW vertex loop. Clipping helpers are exposed for
/// direct testing; they are the numerically delicate part of the module.
using Polygon = std::vector<Eigen::Vector2d>;

/// Intersects `poly` with the half-plane {x : dot(n, x) <= c}.
Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& n, double c);

/// Exact area of the intersection of a convex CCW polygon with the disk of
/// radius `radius` centered at the origin, via circular-segment decomposition.
double disk_clipped_area(const Polygon& poly, double radius);

/// Indices (excluding `index`) within `radius` of point `index`.
std::vector<int> radius_neighbors(const PointCloud& cloud, int index, double radius);

/// The k nearest other points, ties broken by lower index.
std::vector<int> k_nearest_neighbors(const PointCloud& cloud, int index, int k);

}  // namespace detail

}  // namespace pmfht
