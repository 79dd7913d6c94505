#pragma once

#include "pmfht/geometry.hpp"
#include "pmfht/types.hpp"

namespace pmfht {

/// Eigen-structure of the manifold harmonic transform matrix F_M = H^T B^{1/2}.
/// F_M is real orthogonal, so F_M = V diag(omega) V^H with V unitary and
/// |omega_i| = 1. Fractional powers use the principal branch
/// omega^alpha = exp(i alpha theta), theta = Arg(omega) in (-pi, pi] with
/// Arg(-1) = +pi.
struct ManifoldTransform {
  Vec b_half;      // diagonal of B^{1/2}
  Vec b_half_inv;  // diagonal of B^{-1/2}
  CMat V;          // unitary eigenvectors of F_M
  CVec omega;      // unit-modulus eigenvalues
  Vec theta;       // principal arguments of omega

  int size() const { return static_cast<int>(omega.size()); }
};

/// Fractional-domain coefficients of an N x C multichannel signal.
struct FractionalSpectrum {
  double order = 0.0;
  CMat coeffs;     // N x C
  Vec mass_norm;   // per channel: Re(f^H B f)
};

/// Builds the transform from a harmonic basis and its LBO pair. Throws
/// NotOrthogonal when ||F_M^T F_M - I||_max > 1e-6 and EigensolveFailure when
/// the eigendecomposition does not reconstruct F_M.
ManifoldTransform build_transform(const HarmonicBasis& basis, const LboPair& lbo);

/// Builds a transform directly from a real orthogonal matrix and a positive
/// mass diagonal. Used by tests and when rehydrating a serialized transform.
ManifoldTransform transform_from_orthogonal(const Mat& F, const Vec& b_diag);

/// Dense fractional power F^(alpha) = V diag(exp(i alpha theta)) V^H.
CMat fractional_matrix(const ManifoldTransform& t, double alpha);

/// Forward transform: coeffs = F^(alpha) (B^{1/2} f), one column per channel.
FractionalSpectrum forward(const ManifoldTransform& t, double alpha, const CMat& signal);
FractionalSpectrum forward(const ManifoldTransform& t, double alpha, const Mat& signal);

/// Inverse of `forward` at the spectrum's own order: B^{-1/2} F^(-alpha) coeffs.
CMat inverse(const ManifoldTransform& t, const FractionalSpectrum& spectrum);

namespace detail {

/// Unit-modulus eigendecomposition of a real orthogonal matrix, V unitary.
/// Works on the eigenspaces of the symmetric part (F + F^T)/2: F restricted
/// to each such eigenspace is a small orthogonal block whose complex Schur
/// form supplies unitary eigenvectors even for degenerate clusters.
void decompose_orthogonal(const Mat& F, CMat& V, CVec& omega);

/// Principal argument in (-pi, pi]; real negative axis maps to +pi.
double principal_arg(Cplx w);

/// Applies F^(alpha) to columns of X using the factored form (two dense
/// mat-vecs per column instead of forming the N x N fractional matrix).
CMat apply_fractional(const ManifoldTransform& t, double alpha, const CMat& X);

}  // namespace detail

}  // namespace pmfht
