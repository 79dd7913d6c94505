#include "pmfht/radar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pmfht {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

void validate_cube(const RadarCube& cube) {
  if (cube.range_cells() < 1 || cube.pulses() < 2) {
    throw EmptyCube("cube is " + std::to_string(cube.range_cells()) + " x " +
                    std::to_string(cube.pulses()));
  }
  if (!cube.echoes.allFinite()) throw InvalidArgument("cube contains non-finite echoes");
}

double scale01(double v, double lo, double hi) {
  return hi - lo > 0.0 ? (v - lo) / (hi - lo) : 0.0;
}

double power_db(Cplx e) {
  // Zero-power samples are floored far below any physical echo so the dB
  // channel stays finite.
  return 10.0 * std::log10(std::max(std::norm(e), 1e-300));
}

}  // namespace

CloudScaling cube_scaling(const RadarCube& cube) {
  validate_cube(cube);
  const int R = cube.range_cells();
  const int M = cube.pulses();
  CloudScaling s;
  s.x_lo = 0.0;
  s.x_hi = static_cast<double>(R - 1);
  s.y_lo = 0.0;
  s.y_hi = static_cast<double>(M - 1);
  double lo = power_db(cube.echoes(0, 0));
  double hi = lo;
  for (int r = 0; r < R; ++r) {
    for (int m = 0; m < M; ++m) {
      const double z = power_db(cube.echoes(r, m));
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
  }
  s.z_lo = lo;
  s.z_hi = hi;
  return s;
}

PointCloud cube_to_cloud(const RadarCube& cube, const CloudScaling& s) {
  validate_cube(cube);
  const int R = cube.range_cells();
  const int M = cube.pulses();
  PointCloud cloud;
  cloud.pts.resize(R * M, 3);
  for (int r = 0; r < R; ++r) {
    for (int m = 0; m < M; ++m) {
      const int i = r * M + m;  // range-major layout
      cloud.pts(i, 0) = scale01(static_cast<double>(r), s.x_lo, s.x_hi);
      cloud.pts(i, 1) = scale01(static_cast<double>(m), s.y_lo, s.y_hi);
      cloud.pts(i, 2) = scale01(power_db(cube.echoes(r, m)), s.z_lo, s.z_hi);
    }
  }
  return cloud;
}

PointCloud cube_to_cloud(const RadarCube& cube) { return cube_to_cloud(cube, cube_scaling(cube)); }

Vec cube_z_channel(const RadarCube& cube, const CloudScaling& s) {
  validate_cube(cube);
  const int R = cube.range_cells();
  const int M = cube.pulses();
  Vec z(R * M);
  for (int r = 0; r < R; ++r) {
    for (int m = 0; m < M; ++m) {
      z(r * M + m) = scale01(power_db(cube.echoes(r, m)), s.z_lo, s.z_hi);
    }
  }
  return z;
}

CVec steering_vector(double velocity_mps, double wavelength_m, double prf_hz, int pulses) {
  if (pulses < 1) throw InvalidArgument("steering vector needs at least one pulse");
  if (!(wavelength_m > 0.0) || !(prf_hz > 0.0) || !std::isfinite(velocity_mps)) {
    throw InvalidArgument("bad steering parameters");
  }
  const double doppler_hz = 2.0 * velocity_mps / wavelength_m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(pulses));
  CVec p(pulses);
  for (int m = 0; m < pulses; ++m) {
    p(m) = scale * std::polar(1.0, -kTau * m * doppler_hz / prf_hz);
  }
  return p;
}

RadarCube inject_target(const RadarCube& cube, int cell, double scr_db, const CVec& steering,
                        double phase) {
  validate_cube(cube);
  if (cell < 0 || cell >= cube.range_cells()) {
    throw IndexOutOfRange("target cell " + std::to_string(cell));
  }
  if (steering.size() != cube.pulses()) {
    throw DimensionMismatch("steering length " + std::to_string(steering.size()) +
                            " != pulse count " + std::to_string(cube.pulses()));
  }
  const double p_clutter =
      cube.echoes.row(cell).squaredNorm() / static_cast<double>(cube.pulses());
  const double amp = std::sqrt(p_clutter * std::pow(10.0, scr_db / 10.0));
  RadarCube out = cube;
  out.echoes.row(cell) += (amp * std::polar(1.0, phase)) * steering.transpose();
  return out;
}

Vec estimate_reference(const Vec& y, int range_cells, int pulses, int window) {
  if (range_cells < 1 || pulses < 1 || y.size() != range_cells * pulses) {
    throw DimensionMismatch("signal length " + std::to_string(y.size()) + " != " +
                            std::to_string(range_cells) + " x " + std::to_string(pulses));
  }
  if (window < 1 || window % 2 == 0) {
    throw InvalidArgument("window must be a positive odd width");
  }
  const int half = window / 2;
  Vec x(y.size());
  for (int r = 0; r < range_cells; ++r) {
    const int lo = std::max(0, r - half);
    const int hi = std::min(range_cells - 1, r + half);  // window clipped at the edges
    const double inv = 1.0 / static_cast<double>(hi - lo + 1);
    for (int m = 0; m < pulses; ++m) {
      double acc = 0.0;
      for (int rr = lo; rr <= hi; ++rr) acc += y(rr * pulses + m);
      x(r * pulses + m) = acc * inv;
    }
  }
  return x;
}

namespace {

struct DesignCore {
  CVec h;
  Vec T_diag;
  CVec q;
  double nmse = 0.0;
};

// Wiener solve in the fractional domain. Because F^(-alpha) is unitary, the
// Gram matrix E{S^H S} of the rank-one synthesis components reduces exactly
// to diag(E{|y_hat|^2}); the regularized system is solved mode by mode.
DesignCore design_core(const ManifoldTransform& t, double alpha,
                       const std::vector<Realization>& realizations) {
  const int n = t.size();
  if (realizations.empty()) throw InvalidArgument("need at least one realization");

  std::vector<CVec> y_hat(realizations.size());
  std::vector<CVec> x_hat(realizations.size());
  Vec T_diag = Vec::Zero(n);
  CVec q = CVec::Zero(n);
  for (size_t k = 0; k < realizations.size(); ++k) {
    const Realization& rz = realizations[k];
    if (rz.y.size() != n || rz.x.size() != n) {
      throw DimensionMismatch("realization " + std::to_string(k) + " length mismatch");
    }
    y_hat[k] = forward(t, alpha, CMat(rz.y.cast<Cplx>())).coeffs.col(0);
    x_hat[k] = forward(t, alpha, CMat(rz.x.cast<Cplx>())).coeffs.col(0);
    T_diag += y_hat[k].cwiseAbs2();
    q += y_hat[k].conjugate().cwiseProduct(x_hat[k]);
  }
  const double count = static_cast<double>(realizations.size());
  T_diag /= count;
  q /= count;

  const double eps = 1e-10 * T_diag.sum() / n;
  DesignCore out;
  out.T_diag = T_diag;
  out.q = q;
  out.h = q.array() / (T_diag.array() + eps);

  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < realizations.size(); ++k) {
    num += (out.h.cwiseProduct(y_hat[k]) - x_hat[k]).squaredNorm();
    den += x_hat[k].squaredNorm();
  }
  out.nmse = den > 0.0 ? num / den : 0.0;
  return out;
}

}  // namespace

FilterDesign design_filter(const ManifoldTransform& t, double alpha,
                           const std::vector<Realization>& realizations) {
  const DesignCore core = design_core(t, alpha, realizations);
  FilterDesign design;
  design.order = alpha;
  design.h = core.h;
  design.T = core.T_diag.cast<Cplx>().asDiagonal();
  design.q = core.q;
  design.nmse = core.nmse;
  return design;
}

CVec apply_filter(const ManifoldTransform& t, double alpha, const CVec& h, const Vec& y) {
  if (h.size() != t.size() || y.size() != t.size()) {
    throw DimensionMismatch("filter/signal lengths disagree with transform");
  }
  FractionalSpectrum spec = forward(t, alpha, CMat(y.cast<Cplx>()));
  spec.coeffs = spec.coeffs.col(0).cwiseProduct(h);
  return inverse(t, spec).col(0);
}

CVec apply_filter(const ManifoldTransform& t, const FilterDesign& design, const Vec& y) {
  return apply_filter(t, design.order, design.h, y);
}

namespace {

std::mt19937_64 seeded(std::uint64_t seed) { return std::mt19937_64(seed); }

struct Scenario {
  CloudScaling scaling;
  ManifoldTransform transform;
  CVec steering;
  int R = 0, M = 0;
};

Scenario prepare_scenario(const TransformBuilder& builder, const RadarCube& cube,
                          const ClutterProtocol& protocol) {
  validate_cube(cube);
  if (protocol.target_cell < 0 || protocol.target_cell >= cube.range_cells()) {
    throw IndexOutOfRange("target cell " + std::to_string(protocol.target_cell));
  }
  if (protocol.realizations < 1) throw InvalidArgument("need at least one realization");
  Scenario sc;
  sc.R = cube.range_cells();
  sc.M = cube.pulses();
  sc.scaling = cube_scaling(cube);
  // The manifold is built once from the unperturbed cube; realizations and
  // trials below vary only the z signal read off under this fixed scaling.
  sc.transform = builder(cube_to_cloud(cube));
  sc.steering =
      steering_vector(protocol.velocity_mps, cube.wavelength_m, cube.prf_hz, sc.M);
  return sc;
}

Realization draw_realization(const RadarCube& cube, const Scenario& sc,
                             const ClutterProtocol& protocol, std::uint64_t seed,
                             bool with_target, double scr_db) {
  std::mt19937_64 rng = seeded(seed);
  RadarCube noisy = add_receiver_noise(cube, protocol.noise_db, rng);
  if (with_target) {
    std::uniform_real_distribution<double> uphase(0.0, kTau);
    const double phase = uphase(rng);
    noisy = inject_target(noisy, protocol.target_cell, scr_db, sc.steering, phase);
  }
  Realization rz;
  rz.y = cube_z_channel(noisy, sc.scaling);
  rz.x = estimate_reference(rz.y, sc.R, sc.M, protocol.window);
  return rz;
}

std::vector<Realization> design_set(const RadarCube& cube, const Scenario& sc,
                                    const ClutterProtocol& protocol, double scr_db,
                                    std::uint64_t stream) {
  std::vector<Realization> set;
  set.reserve(protocol.realizations);
  for (int k = 0; k < protocol.realizations; ++k) {
    set.push_back(draw_realization(cube, sc, protocol, protocol.seed + stream + k, true, scr_db));
  }
  return set;
}

// CFAR statistic: energy of the clutter-suppressed residual in the test cell
// over the mean residual energy of the remaining range cells.
double residual_cell_ratio(const ManifoldTransform& t, double alpha, const CVec& h, const Vec& y,
                           int R, int M, int cell) {
  const CVec residual = y.cast<Cplx>() - apply_filter(t, alpha, h, y);
  Vec energy(R);
  for (int r = 0; r < R; ++r) {
    energy(r) = residual.segment(r * M, M).squaredNorm();
  }
  double ref = 0.0;
  for (int r = 0; r < R; ++r) {
    if (r != cell) ref += energy(r);
  }
  ref /= static_cast<double>(R - 1);
  return ref > 0.0 ? energy(cell) / ref : std::numeric_limits<double>::infinity();
}

}  // namespace

SweepResult sweep_alpha(const TransformBuilder& builder, const RadarCube& cube,
                        const std::vector<double>& alphas, const ClutterProtocol& protocol) {
  if (alphas.empty()) throw InvalidArgument("alpha grid is empty");
  const Scenario sc = prepare_scenario(builder, cube, protocol);
  const std::vector<Realization> set =
      design_set(cube, sc, protocol, protocol.scr_db, /*stream=*/1);

  SweepResult result;
  result.alphas = alphas;
  result.nmse.resize(alphas.size());
  for (size_t a = 0; a < alphas.size(); ++a) {
    result.nmse[a] = design_core(sc.transform, alphas[a], set).nmse;
  }
  result.argmin = static_cast<int>(
      std::min_element(result.nmse.begin(), result.nmse.end()) - result.nmse.begin());
  return result;
}

DetectionResult monte_carlo_detection(const TransformBuilder& builder, const RadarCube& cube,
                                      const std::vector<double>& scr_grid, int trials,
                                      double alpha, const ThresholdPolicy& policy,
                                      const ClutterProtocol& protocol) {
  if (scr_grid.empty()) throw InvalidArgument("SCR grid is empty");
  if (trials < 1 || trials > 1000000) throw InvalidArgument("trial count out of range");
  if (policy.calibration_trials < 1) throw InvalidArgument("calibration trials out of range");
  if (!(policy.pfa > 0.0) || !(policy.pfa < 1.0)) throw InvalidArgument("pfa outside (0, 1)");
  const Scenario sc = prepare_scenario(builder, cube, protocol);
  if (sc.R < 2) throw InvalidArgument("CFAR needs at least two range cells");

  // Disjoint deterministic seed streams: H1 trials sit at seed + trial index
  // (shared across SCRs), calibration and design draws far above.
  constexpr std::uint64_t kCalibStream = 1u << 20;
  constexpr std::uint64_t kDesignStream = 1u << 24;

  // The suppression filter is designed on target-free draws: a design set
  // containing the target would teach the filter to reproduce it in the
  // clutter estimate and erase it from the residual. One design also means
  // one threshold, shared by every SCR.
  std::vector<Realization> set;
  set.reserve(protocol.realizations);
  for (int k = 0; k < protocol.realizations; ++k) {
    set.push_back(draw_realization(cube, sc, protocol,
                                   protocol.seed + kDesignStream + k, false, 0.0));
  }
  const CVec h = design_core(sc.transform, alpha, set).h;

  Vec ratios(policy.calibration_trials);
  for (int c = 0; c < policy.calibration_trials; ++c) {
    const Realization rz =
        draw_realization(cube, sc, protocol, protocol.seed + kCalibStream + c, false, 0.0);
    ratios(c) = residual_cell_ratio(sc.transform, alpha, h, rz.y, sc.R, sc.M,
                                    protocol.target_cell);
  }
  std::sort(ratios.begin(), ratios.end());
  // Exceedance of the r-th of n order statistics has mean (n - r + 1)/(n + 1),
  // so aim r at (1 - pfa)(n + 1) to make the empirical false-alarm rate pfa.
  const int rank = std::min(
      policy.calibration_trials,
      std::max(1, static_cast<int>(std::ceil(
                      (1.0 - policy.pfa) *
                      static_cast<double>(policy.calibration_trials + 1)))));
  const double threshold = ratios(rank - 1);

  DetectionResult result;
  result.scr_db = scr_grid;
  result.pd.resize(scr_grid.size());
  result.threshold_ratio.assign(scr_grid.size(), threshold);

  for (size_t s = 0; s < scr_grid.size(); ++s) {
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
      const Realization rz =
          draw_realization(cube, sc, protocol, protocol.seed + i, true, scr_grid[s]);
      if (residual_cell_ratio(sc.transform, alpha, h, rz.y, sc.R, sc.M, protocol.target_cell) >
          threshold) {
        ++hits;
      }
    }
    result.pd[s] = static_cast<double>(hits) / static_cast<double>(trials);
  }
  return result;
}

RadarCube synth_sea_clutter(const SeaClutterParams& params) {
  if (params.range_cells < 1 || params.pulses < 2) {
    throw InvalidArgument("clutter cube needs R >= 1, M >= 2");
  }
  if (!(params.shape > 0.0) || !(params.ar1 >= 0.0) || !(params.ar1 < 1.0)) {
    throw InvalidArgument("bad texture/correlation parameters");
  }
  std::mt19937_64 rng(params.seed);
  std::gamma_distribution<double> texture(params.shape, 1.0 / params.shape);  // unit mean
  std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);     // CN(0,1) parts

  RadarCube cube;
  cube.prf_hz = params.prf_hz;
  cube.wavelength_m = params.wavelength_m;
  cube.echoes.resize(params.range_cells, params.pulses);
  const double mix = std::sqrt(1.0 - params.ar1 * params.ar1);
  for (int r = 0; r < params.range_cells; ++r) {
    const double tau = std::sqrt(texture(rng));
    Cplx g(gauss(rng), gauss(rng));
    cube.echoes(r, 0) = tau * g;
    for (int m = 1; m < params.pulses; ++m) {
      g = params.ar1 * g + mix * Cplx(gauss(rng), gauss(rng));
      cube.echoes(r, m) = tau * g;
    }
  }
  return cube;
}

RadarCube add_receiver_noise(const RadarCube& cube, double noise_db, std::mt19937_64& rng) {
  validate_cube(cube);
  if (!std::isfinite(noise_db)) throw InvalidArgument("noise level must be finite");
  const double mean_power =
      cube.echoes.squaredNorm() / static_cast<double>(cube.echoes.size());
  const double sigma =
      std::sqrt(mean_power * std::pow(10.0, noise_db / 10.0) / 2.0);  // per component
  std::normal_distribution<double> gauss(0.0, 1.0);
  RadarCube out = cube;
  for (int r = 0; r < cube.range_cells(); ++r) {
    for (int m = 0; m < cube.pulses(); ++m) {
      out.echoes(r, m) += Cplx(sigma * gauss(rng), sigma * gauss(rng));
    }
  }
  return out;
}

}  // namespace pmfht
