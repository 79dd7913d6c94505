#pragma once

#include <vector>

#include "pmfht/transform.hpp"

namespace pmfht {

/// Interpolation data for reconstructing bandlimited signals from point
/// samples. `basis` holds V_Kb = B^{-1/2} (first K_b columns of F^(-alpha)),
/// whose column order follows the ascending-eigenvalue order of the harmonic
/// basis. `left_inverse` is the Moore-Penrose left inverse of the sampled
/// rows of `basis`.
struct SamplingPlan {
  double order = 0.0;
  int bandwidth = 0;
  std::vector<int> indices;
  CMat basis;         // N x K_b
  CMat left_inverse;  // K_b x K
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Projects the signal onto the first `bandwidth` fractional modes: forward,
/// zero all coefficients with index >= bandwidth, inverse.
CMat bandlimit(const ManifoldTransform& t, double alpha, const CMat& signal, int bandwidth);

/// Builds a plan for the given distinct sample indices. Throws RankDeficient
/// when sigma_min <= 1e-10 sigma_max for the sampled submatrix.
SamplingPlan make_plan(const ManifoldTransform& t, double alpha, std::vector<int> indices,
                       int bandwidth);

/// Rows of `signal` at the plan's sample indices, in plan order.
CMat take_samples(const CMat& signal, const std::vector<int>& indices);

/// Least-squares reconstruction: basis * (left_inverse * samples). Exact for
/// signals in the bandlimited subspace.
CMat reconstruct(const SamplingPlan& plan, const CMat& samples);

/// Greedy sample-set selection: starting empty, repeatedly adds the index
/// that maximizes sigma_min of the growing row submatrix of the plan basis
/// (ties broken by lowest index). Throws RankDeficient when the completed
/// set fails the plan's rank test.
std::vector<int> optimal_sampling(const ManifoldTransform& t, double alpha, int bandwidth,
                                  int count);

}  // namespace pmfht
