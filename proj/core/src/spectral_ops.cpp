#include "pmfht/spectral_ops.hpp"

namespace pmfht {

namespace {

void check_signal(const ManifoldTransform& t, const CVec& f, const char* what) {
  if (f.size() != t.size()) {
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(f.size()) +
                            " entries, transform has " + std::to_string(t.size()));
  }
}

void check_index(const ManifoldTransform& t, int index, const char* what) {
  if (index < 0 || index >= t.size()) {
    throw IndexOutOfRange(std::string(what) + " " + std::to_string(index));
  }
}

CVec forward_vec(const ManifoldTransform& t, double alpha, const CVec& f) {
  return forward(t, alpha, CMat(f)).coeffs.col(0);
}

CVec inverse_vec(const ManifoldTransform& t, double alpha, const CVec& coeffs) {
  FractionalSpectrum s;
  s.order = alpha;
  s.coeffs = coeffs;
  return inverse(t, s).col(0);
}

}  // namespace

ImpulseSpectrum impulse_spectrum(const ManifoldTransform& t, double alpha, int index) {
  check_index(t, index, "impulse index");
  CVec unit = CVec::Zero(t.size());
  unit(index) = Cplx(1.0, 0.0);
  ImpulseSpectrum out;
  out.order = alpha;
  out.index = index;
  out.coeffs = t.b_half(index) * detail::apply_fractional(t, alpha, CMat(unit)).col(0);
  return out;
}

CVec translate(const ManifoldTransform& t, double alpha, const CVec& f, int index) {
  check_signal(t, f, "signal");
  check_index(t, index, "translation index");
  const CVec f_hat = forward_vec(t, alpha, f);
  const CVec d_hat = impulse_spectrum(t, alpha, index).coeffs;
  return inverse_vec(t, alpha, f_hat.cwiseProduct(d_hat));
}

CVec convolve(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g) {
  check_signal(t, f, "first signal");
  check_signal(t, g, "second signal");
  const CVec f_hat = forward_vec(t, alpha, f);
  const CVec g_hat = forward_vec(t, alpha, g);
  return inverse_vec(t, alpha, f_hat.cwiseProduct(g_hat));
}

CVec convolve_spatial(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g,
                      SpatialWeighting weighting) {
  check_signal(t, f, "first signal");
  check_signal(t, g, "second signal");
  const int n = t.size();
  const CVec g_hat = forward_vec(t, alpha, g);
  const CMat Fa = fractional_matrix(t, alpha);
  CVec acc = CVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const Cplx w = weighting == SpatialWeighting::mass_weighted ? t.b_half(i) * f(i) : f(i);
    // Translation of g toward point i with an unnormalized impulse column.
    const CVec term = inverse_vec(t, alpha, g_hat.cwiseProduct(Fa.col(i)));
    acc += w * term;
  }
  return acc;
}

CVec spectral_translate(const ManifoldTransform& t, double alpha, const CVec& g, int freq_index) {
  check_signal(t, g, "signal");
  check_index(t, freq_index, "frequency index");
  CVec unit = CVec::Zero(t.size());
  unit(freq_index) = Cplx(1.0, 0.0);
  const CVec col = detail::apply_fractional(t, -alpha, CMat(unit)).col(0);
  return detail::apply_fractional(t, alpha, CMat(CVec(col.cwiseProduct(g)))).col(0);
}

CVec spectral_convolve(const ManifoldTransform& t, double alpha, const CVec& f_hat,
                       const CVec& g) {
  check_signal(t, f_hat, "spectrum");
  check_signal(t, g, "signal");
  // sum_k f_hat(k) S_k(g) collapses to F^(alpha) ((F^(-alpha) f_hat) .* g).
  const CVec weighted = detail::apply_fractional(t, -alpha, CMat(f_hat)).col(0);
  return detail::apply_fractional(t, alpha, CMat(CVec(weighted.cwiseProduct(g)))).col(0);
}

CVec correlate(const ManifoldTransform& t, double alpha, const CVec& f, const CVec& g) {
  check_signal(t, f, "first signal");
  check_signal(t, g, "second signal");
  const CVec f_hat = forward_vec(t, alpha, f);
  const CVec g_hat = forward_vec(t, alpha, g);
  return inverse_vec(t, alpha, f_hat.conjugate().cwiseProduct(g_hat));
}

}  // namespace pmfht
