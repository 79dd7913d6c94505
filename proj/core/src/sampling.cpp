#include "pmfht/sampling.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace pmfht {

namespace {

constexpr double kRankTol = 1e-10;

// First `bandwidth` columns of B^{-1/2} F^(-alpha), the synthesis basis of
// the bandlimited subspace.
CMat plan_basis(const ManifoldTransform& t, double alpha, int bandwidth) {
  const int n = t.size();
  CMat E = CMat::Zero(n, bandwidth);
  for (int k = 0; k < bandwidth; ++k) E(k, k) = Cplx(1.0, 0.0);
  return t.b_half_inv.asDiagonal() * detail::apply_fractional(t, -alpha, E);
}

void check_bandwidth(const ManifoldTransform& t, int bandwidth) {
  if (bandwidth < 1 || bandwidth > t.size()) {
    throw InvalidArgument("bandwidth " + std::to_string(bandwidth) + " outside [1, " +
                          std::to_string(t.size()) + "]");
  }
}

double smallest_singular_value(const CMat& A) {
  Eigen::JacobiSVD<CMat> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

CMat bandlimit(const ManifoldTransform& t, double alpha, const CMat& signal, int bandwidth) {
  check_bandwidth(t, bandwidth);
  FractionalSpectrum spec = forward(t, alpha, signal);
  spec.coeffs.bottomRows(t.size() - bandwidth).setZero();
  return inverse(t, spec);
}

SamplingPlan make_plan(const ManifoldTransform& t, double alpha, std::vector<int> indices,
                       int bandwidth) {
  check_bandwidth(t, bandwidth);
  const int count = static_cast<int>(indices.size());
  if (count < bandwidth) {
    throw InvalidArgument("need at least bandwidth samples, got " + std::to_string(count));
  }
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("sample indices must be distinct");
  }
  for (int i : indices) {
    if (i < 0 || i >= t.size()) throw IndexOutOfRange("sample index " + std::to_string(i));
  }

  SamplingPlan plan;
  plan.order = alpha;
  plan.bandwidth = bandwidth;
  plan.indices = std::move(indices);
  plan.basis = plan_basis(t, alpha, bandwidth);

  CMat A(count, bandwidth);
  for (int r = 0; r < count; ++r) A.row(r) = plan.basis.row(plan.indices[r]);

  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& sv = svd.singularValues();
  plan.sigma_max = sv(0);
  plan.sigma_min = sv(sv.size() - 1);
  if (!(plan.sigma_min > kRankTol * plan.sigma_max)) {
    throw RankDeficient("sampled basis: sigma_min/sigma_max = " +
                        std::to_string(plan.sigma_min / plan.sigma_max));
  }
  // Moore-Penrose left inverse (A has full column rank here).
  plan.left_inverse =
      svd.matrixV() * sv.cwiseInverse().asDiagonal().toDenseMatrix().cast<Cplx>() *
      svd.matrixU().adjoint();
  return plan;
}

CMat take_samples(const CMat& signal, const std::vector<int>& indices) {
  CMat out(static_cast<int>(indices.size()), signal.cols());
  for (int r = 0; r < out.rows(); ++r) {
    const int i = indices[r];
    if (i < 0 || i >= signal.rows()) throw IndexOutOfRange("sample index " + std::to_string(i));
    out.row(r) = signal.row(i);
  }
  return out;
}

CMat reconstruct(const SamplingPlan& plan, const CMat& samples) {
  if (samples.rows() != static_cast<Eigen::Index>(plan.indices.size())) {
    throw DimensionMismatch("sample rows " + std::to_string(samples.rows()) +
                            " != plan size " + std::to_string(plan.indices.size()));
  }
  return plan.basis * (plan.left_inverse * samples);
}

std::vector<int> optimal_sampling(const ManifoldTransform& t, double alpha, int bandwidth,
                                  int count) {
  check_bandwidth(t, bandwidth);
  const int n = t.size();
  if (count < bandwidth || count > n) {
    throw InvalidArgument("sample count " + std::to_string(count) + " outside [" +
                          std::to_string(bandwidth) + ", " + std::to_string(n) + "]");
  }
  const CMat basis = plan_basis(t, alpha, bandwidth);

  std::vector<int> chosen;
  std::vector<char> used(n, 0);
  CMat A(count, bandwidth);
  for (int step = 0; step < count; ++step) {
    double best = -1.0;
    int best_j = -1;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      A.row(step) = basis.row(j);
      const double s = smallest_singular_value(A.topRows(step + 1));
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    used[best_j] = 1;
    chosen.push_back(best_j);
    A.row(step) = basis.row(best_j);
  }

  make_plan(t, alpha, chosen, bandwidth);  // throws RankDeficient on failure
  return chosen;
}

}  // namespace pmfht
