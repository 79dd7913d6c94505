#pragma once

#include <array>
#include <vector>

#include "pmfht/geometry.hpp"
#include "pmfht/transform.hpp"
#include "pmfht/types.hpp"

namespace pmfht::testing {

/// Area of the Voronoi cell of site `center` among `sites` (2D rows),
/// intersected with the disk of radius `delta` about that site, estimated by
/// dense grid sampling. Accuracy is set by `grid` (error ~ delta/grid).
double voronoi_disk_area_grid(const Eigen::Matrix<double, Eigen::Dynamic, 2>& sites, int center,
                              double delta, int grid = 4000);

/// Area of a circle-free convex polygon by the shoelace formula.
double shoelace_area(const std::vector<std::array<double, 2>>& polygon);

/// Generalized eigensolution of -Q h = lambda B h computed directly with
/// Eigen's generalized solver (a different path from the whitening the
/// library uses). Eigenvalues ascending; columns B-orthonormal.
struct GeneralizedEigen {
  Vec eigenvalues;
  Mat H;
};
GeneralizedEigen generalized_eigs(const Mat& Q, const Vec& b_diag);

/// Fractional power of the orthogonal matrix F by a dense complex
/// eigendecomposition (principal log of each unit eigenvalue, the branch
/// with angles in (-pi, pi] and -1 mapped to +pi). Small N only.
CMat fractional_power_dense(const Mat& F, double alpha);

/// Least-squares solution h of min_h sum_k ||diag(y_hat_k) h - x_hat_k||^2
/// by stacking the diagonal systems and solving with an SVD.
CVec stacked_wiener_solve(const std::vector<CVec>& y_hats, const std::vector<CVec>& x_hats);

/// Best achievable minimum singular value over all K-subsets of rows of
/// `basis` (exhaustive; use only for small N).
struct ExhaustivePlan {
  std::vector<int> indices;
  double sigma_min = 0.0;
};
ExhaustivePlan best_rows_exhaustive(const CMat& basis, int k);

/// Half-width of the 95% normal-approximation band for a proportion.
double binomial_band(double p, int n);

}  // namespace pmfht::testing
