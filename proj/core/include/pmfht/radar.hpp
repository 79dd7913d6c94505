#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pmfht/transform.hpp"

namespace pmfht {

/// Coherent radar data block: R range cells by M pulses.
struct RadarCube {
  CMat echoes;  // R x M
  double prf_hz = 0.0;
  double wavelength_m = 0.0;

  int range_cells() const { return static_cast<int>(echoes.rows()); }
  int pulses() const { return static_cast<int>(echoes.cols()); }
};

/// Affine min-max constants used to map a cube onto the unit cube. Kept
/// separate so perturbed signals can reuse the scaling of a reference cube.
struct CloudScaling {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  double z_lo = 0.0, z_hi = 1.0;
};

CloudScaling cube_scaling(const RadarCube& cube);

/// Point cloud of the cube in range-major order (point r*M + m):
/// x = normalized range index, y = normalized pulse index, z = echo power
/// in dB, each channel min-max scaled to [0, 1]. A constant channel maps
/// to zero. Throws EmptyCube for cubes with R < 1 or M < 2.
PointCloud cube_to_cloud(const RadarCube& cube);
PointCloud cube_to_cloud(const RadarCube& cube, const CloudScaling& scaling);

/// The z channel alone under fixed scaling (the signal-of-interest layout
/// used by the filtering pipeline).
Vec cube_z_channel(const RadarCube& cube, const CloudScaling& scaling);

/// Unit-norm Doppler steering vector: p_m = exp(-j 2 pi m f_d / f_r)/sqrt(M)
/// with f_d = 2 v / lambda.
CVec steering_vector(double velocity_mps, double wavelength_m, double prf_hz, int pulses);

/// Adds A e^{j phase} p to the pulse row of `cell`, A chosen so the
/// signal-to-clutter ratio against that cell's mean clutter power is scr_db:
/// A = sqrt(P_clutter 10^(scr/10)).
RadarCube inject_target(const RadarCube& cube, int cell, double scr_db, const CVec& steering,
                        double phase = 0.0);

/// Sliding-window reference: for each range cell, the mean of the z-signal
/// over the window of neighboring cells (window clipped to the valid range
/// at the edges), pulse by pulse. y is length R*M in range-major order.
Vec estimate_reference(const Vec& y, int range_cells, int pulses, int window = 3);

/// One supervised pair for the Wiener design: observed signal y and desired
/// reference x, both length N in cloud order.
struct Realization {
  Vec y;
  Vec x;
};

/// Fractional-domain Wiener filter. T and q average S_i^H S_j and S_i^H x
/// over realizations, where S_i is the i-th rank-one synthesis component
/// applied to the mass-weighted signal; h solves (T + eps I) h = q with
/// eps = 1e-10 trace(T)/N. nmse is the achieved pooled objective
/// sum ||S h - x~||^2 / sum ||x~||^2 in mass-weighted coordinates.
struct FilterDesign {
  double order = 0.0;
  CVec h;
  CMat T;
  CVec q;
  double nmse = 0.0;
};

FilterDesign design_filter(const ManifoldTransform& t, double alpha,
                           const std::vector<Realization>& realizations);

/// Applies the designed response: B^{-1/2} F^(-alpha) diag(h) F^(alpha) B^{1/2} y.
CVec apply_filter(const ManifoldTransform& t, const FilterDesign& design, const Vec& y);
CVec apply_filter(const ManifoldTransform& t, double alpha, const CVec& h, const Vec& y);

using TransformBuilder = std::function<ManifoldTransform(const PointCloud&)>;

/// Scenario shared by the sweep and detection drivers. Realizations differ
/// by the injected target's pulse phase and by receiver noise; the manifold
/// is built once from the unperturbed cube and only the z signal varies.
struct ClutterProtocol {
  int target_cell = 4;
  double velocity_mps = 2.58;
  double scr_db = 0.0;        // SCR of injected design/evaluation targets
  int window = 3;             // reference-estimator width in range cells
  int realizations = 8;       // supervised pairs per filter design
  double noise_db = -20.0;    // receiver noise power relative to mean clutter
  std::uint64_t seed = 1;
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> nmse;
  int argmin = 0;
};

/// Designs and scores the filter at each order in `alphas` over a common set
/// of protocol realizations; argmin ties resolve to the lowest index.
SweepResult sweep_alpha(const TransformBuilder& builder, const RadarCube& cube,
                        const std::vector<double>& alphas, const ClutterProtocol& protocol);

/// Cell-averaged CFAR on the clutter-suppressed residual y - filter(y): the
/// target cell's residual energy is compared against the mean residual energy
/// of the other range cells; the ratio threshold is calibrated on target-free
/// trials so the empirical false-alarm rate is pfa.
struct ThresholdPolicy {
  double pfa = 1e-2;
  int calibration_trials = 200;
};

struct DetectionResult {
  std::vector<double> scr_db;
  std::vector<double> pd;
  std::vector<double> threshold_ratio;  // calibrated CFAR threshold per SCR
};

/// Monte Carlo probability of detection over the SCR grid. The filter and
/// the CFAR threshold are designed once on target-free draws and shared by
/// every SCR; each trial injects a random-phase target plus fresh receiver
/// noise (trial seeds are protocol.seed + trial index, common across SCRs)
/// and tests the CFAR statistic.
DetectionResult monte_carlo_detection(const TransformBuilder& builder, const RadarCube& cube,
                                      const std::vector<double>& scr_grid, int trials,
                                      double alpha, const ThresholdPolicy& policy,
                                      const ClutterProtocol& protocol);

/// Compound-Gaussian sea-clutter scaffold: per-cell K-distribution texture
/// (gamma with unit mean) times AR(1)-correlated complex Gaussian speckle.
struct SeaClutterParams {
  int range_cells = 10;
  int pulses = 251;
  double prf_hz = 1075.0;
  double wavelength_m = 0.03;
  double shape = 2.0;  // gamma shape of the texture
  double ar1 = 0.9;    // pulse-to-pulse speckle correlation
  std::uint64_t seed = 1;
};

RadarCube synth_sea_clutter(const SeaClutterParams& params);

/// Adds circular complex Gaussian noise at `noise_db` relative to the mean
/// echo power of the cube.
RadarCube add_receiver_noise(const RadarCube& cube, double noise_db, std::mt19937_64& rng);

}  // namespace pmfht
