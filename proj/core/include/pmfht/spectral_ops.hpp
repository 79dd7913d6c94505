#pragma once

#include "pmfht/transform.hpp"

namespace pmfht {

/// Spectrum of the unit impulse at one point: sqrt(B_ii) times the i-th
/// column of F^(alpha).
struct ImpulseSpectrum {
  double order = 0.0;
  int index = 0;
  CVec coeffs;
};

ImpulseSpectrum impulse_spectrum(const ManifoldTransform& t, double alpha, int index);

/// Generalized translation of f to point `index`:
///   B^{-1/2} F^(-alpha) (f_hat  .*  impulse_hat_index).
CVec translate(const ManifoldTransform& t, double alpha, const CVec& f, int index);

/// Spectral-domain convolution: inverse transform of f_hat .* g_hat.
CVec convolve(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g);

/// Weighting of the spatial-sum convolution form. `mass_weighted` sums
/// sqrt(B_ii) f(i) times the unnormalized-impulse translation and matches
/// `convolve` to machine precision; `unweighted` sums plain f(i) over the
/// same terms and coincides with `convolve` only when B is the identity.
enum class SpatialWeighting { mass_weighted, unweighted };

CVec convolve_spatial(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g,
                      SpatialWeighting weighting = SpatialWeighting::mass_weighted);

/// Translation by frequency index k in the spectral domain:
///   F^(alpha) (F^(-alpha) column k  .*  g),  g given in the spatial domain.
CVec spectral_translate(const ManifoldTransform& t, double alpha, const CVec& g, int freq_index);

/// Dual convolution: sum_k f_hat(k) S_k(g). Equals forward(t, alpha, f .* g)
/// where f is the inverse transform of f_hat. Returns spectral coefficients.
CVec spectral_convolve(const ManifoldTransform& t, double alpha, const CVec& f_hat, const CVec& g);

/// Spectral correlation: inverse transform of conj(f_hat) .* g_hat.
CVec correlate(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g);

}  // namespace pmfht
