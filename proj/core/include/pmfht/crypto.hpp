#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "pmfht/transform.hpp"

namespace pmfht {

/// Key material of the coordinate-scrambling cipher: per-axis fractional
/// order pairs plus the chaotic phase-mask seed.
struct EncryptionKey {
  std::array<double, 3> alpha_fwd{0.35, 0.72, 0.15};
  std::array<double, 3> alpha_inv{0.60, 0.20, 0.90};
  double henon_a = 1.4;
  double henon_b = 0.3;
  double u0 = 0.12;
  double v0 = 0.1;
  int burn_in = 100;
};

/// Complex coordinates produced by `encrypt`. Column d holds axis d.
struct EncryptedCloud {
  CMat coords;  // N x 3

  int size() const { return static_cast<int>(coords.rows()); }
};

struct EncryptOptions {
  bool disable_phase_mask = false;  // test hook: psi == 0 for every channel
};

/// Raw orbit of u_{n+1} = 1 - a u_n^2 + v_n, v_{n+1} = b u_n, starting from
/// (u0, v0); returns the first n iterates (u_1, v_1), ..., (u_n, v_n).
/// Throws ChaosDiverged when |u| exceeds 1e6.
std::vector<std::pair<double, double>> henon_orbit(double a, double b, double u0, double v0,
                                                   int n);

/// Phase sequence psi in [0, 1) for one channel: iterates the map from
/// (u0 + stream * 1e-3, v0), discards burn_in iterates, then min-max
/// normalizes the next n u-values (the maximum wraps to 0).
Vec henon_phases(const EncryptionKey& key, int n, int stream);

/// Per-axis scramble: forward at alpha_fwd[d], multiply by the chaotic phase
/// mask exp(j 2 pi psi_d), inverse at alpha_inv[d].
EncryptedCloud encrypt(const ManifoldTransform& t, const PointCloud& cloud,
                       const EncryptionKey& key, const EncryptOptions& options = {});

/// Inverse chain of `encrypt`. Imaginary parts are dropped from the result;
/// if `imag_residue` is non-null it receives the largest |Im| encountered.
PointCloud decrypt(const ManifoldTransform& t, const EncryptedCloud& enc,
                   const EncryptionKey& key, double* imag_residue = nullptr,
                   const EncryptOptions& options = {});

/// Ciphertext file: header "PMFHT-ENC v1 N=<n>" then N rows of 6 floats
/// (re/im per axis) at 17 significant digits. Round trips bit-exactly.
void write_ciphertext(const std::string& path, const EncryptedCloud& enc);
EncryptedCloud read_ciphertext(const std::string& path);

/// Geometry token: the receiver-side transform state (omega, V, diagonal of
/// B), header "PMFHT-GEO v1 N=<n>" followed by little-endian doubles.
void write_geometry_token(const std::string& path, const ManifoldTransform& t);
ManifoldTransform read_geometry_token(const std::string& path);

}  // namespace pmfht
