#include "pmfht/crypto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pmfht {

namespace {

constexpr double kDivergenceLimit = 1e6;
constexpr double kTau = 2.0 * std::numbers::pi;

void validate_key(const EncryptionKey& key) {
  auto finite = [](double v) { return std::isfinite(v); };
  for (int d = 0; d < 3; ++d) {
    if (!finite(key.alpha_fwd[d]) || !finite(key.alpha_inv[d])) {
      throw InvalidArgument("key orders must be finite");
    }
  }
  if (!finite(key.henon_a) || !finite(key.henon_b) || !finite(key.u0) || !finite(key.v0)) {
    throw InvalidArgument("key map parameters must be finite");
  }
  if (key.burn_in < 0) throw InvalidArgument("burn_in must be non-negative");
}

CVec phase_mask(const EncryptionKey& key, int n, int stream, bool disabled, bool conjugated) {
  CVec mask = CVec::Ones(n);
  if (disabled) return mask;
  const Vec psi = henon_phases(key, n, stream);
  for (int i = 0; i < n; ++i) {
    mask(i) = std::polar(1.0, (conjugated ? -kTau : kTau) * psi(i));
  }
  return mask;
}

}  // namespace

std::vector<std::pair<double, double>> henon_orbit(double a, double b, double u0, double v0,
                                                   int n) {
  if (n < 0) throw InvalidArgument("orbit length must be non-negative");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  double u = u0, v = v0;
  for (int i = 0; i < n; ++i) {
    const double un = 1.0 - a * u * u + v;
    const double vn = b * u;
    u = un;
    v = vn;
    if (!std::isfinite(u) || std::abs(u) > kDivergenceLimit) {
      throw ChaosDiverged("orbit escaped at iterate " + std::to_string(i + 1));
    }
    out.emplace_back(u, v);
  }
  return out;
}

Vec henon_phases(const EncryptionKey& key, int n, int stream) {
  validate_key(key);
  if (n < 1) throw InvalidArgument("phase count must be positive");
  if (stream < 0) throw InvalidArgument("stream tag must be non-negative");

  const double u_start = key.u0 + static_cast<double>(stream) * 1e-3;
  const auto orbit = henon_orbit(key.henon_a, key.henon_b, u_start, key.v0, key.burn_in + n);

  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = orbit[key.burn_in + i].first;
  const double lo = u.minCoeff();
  const double hi = u.maxCoeff();
  if (!(hi - lo > 0.0)) return Vec::Zero(n);
  Vec psi = ((u.array() - lo) / (hi - lo)).matrix();
  for (int i = 0; i < n; ++i) {
    if (psi(i) >= 1.0) psi(i) = 0.0;  // keep the range half-open
  }
  return psi;
}

EncryptedCloud encrypt(const ManifoldTransform& t, const PointCloud& cloud,
                       const EncryptionKey& key, const EncryptOptions& options) {
  validate_cloud(cloud);
  validate_key(key);
  const int n = cloud.size();
  if (n != t.size()) throw DimensionMismatch("cloud and transform sizes disagree");

  EncryptedCloud enc;
  enc.coords.resize(n, 3);
  for (int d = 0; d < 3; ++d) {
    const CVec f = cloud.pts.col(d).cast<Cplx>();
    FractionalSpectrum spec = forward(t, key.alpha_fwd[d], CMat(f));
    const CVec mask = phase_mask(key, n, d, options.disable_phase_mask, false);
    spec.coeffs = spec.coeffs.col(0).cwiseProduct(mask);
    spec.order = key.alpha_inv[d];
    enc.coords.col(d) = inverse(t, spec).col(0);
  }
  return enc;
}

PointCloud decrypt(const ManifoldTransform& t, const EncryptedCloud& enc,
                   const EncryptionKey& key, double* imag_residue,
                   const EncryptOptions& options) {
  validate_key(key);
  const int n = enc.size();
  if (enc.coords.cols() != 3) throw DimensionMismatch("encrypted coords must have 3 columns");
  if (n != t.size()) throw DimensionMismatch("ciphertext and transform sizes disagree");

  PointCloud cloud;
  cloud.pts.resize(n, 3);
  double residue = 0.0;
  for (int d = 0; d < 3; ++d) {
    FractionalSpectrum spec = forward(t, key.alpha_inv[d], CMat(CVec(enc.coords.col(d))));
    const CVec mask = phase_mask(key, n, d, options.disable_phase_mask, true);
    spec.coeffs = spec.coeffs.col(0).cwiseProduct(mask);
    spec.order = key.alpha_fwd[d];
    const CVec out = inverse(t, spec).col(0);
    cloud.pts.col(d) = out.real();
    residue = std::max(residue, out.imag().cwiseAbs().maxCoeff());
  }
  if (imag_residue) *imag_residue = residue;
  return cloud;
}

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int parse_header(std::istream& in, const char* magic, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  std::istringstream hs(line);
  std::string tag, version, nfield;
  hs >> tag >> version >> nfield;
  if (tag != magic || nfield.rfind("N=", 0) != 0) {
    throw ParseError(path + ": bad header '" + line + "'");
  }
  if (version != "v1") {
    throw UnsupportedFormat(path + ": unsupported version '" + version + "'");
  }
  int n = 0;
  try {
    n = std::stoi(nfield.substr(2));
  } catch (const std::exception&) {
    throw ParseError(path + ": bad point count in header");
  }
  if (n < 1) throw ParseError(path + ": bad point count in header");
  return n;
}

}  // namespace

void write_ciphertext(const std::string& path, const EncryptedCloud& enc) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "PMFHT-ENC v1 N=" << enc.size() << "\n";
  for (int i = 0; i < enc.size(); ++i) {
    for (int d = 0; d < 3; ++d) {
      if (d) out << ' ';
      out << g17(enc.coords(i, d).real()) << ' ' << g17(enc.coords(i, d).imag());
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path);
}

EncryptedCloud read_ciphertext(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const int n = parse_header(in, "PMFHT-ENC", path);

  EncryptedCloud enc;
  enc.coords.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    double re[3], im[3];
    if (!(in >> re[0] >> im[0] >> re[1] >> im[1] >> re[2] >> im[2])) {
      throw ParseError(path + ": truncated at row " + std::to_string(i + 1));
    }
    for (int d = 0; d < 3; ++d) enc.coords(i, d) = Cplx(re[d], im[d]);
  }
  return enc;
}

void write_geometry_token(const std::string& path, const ManifoldTransform& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int n = t.size();
  out << "PMFHT-GEO v1 N=" << n << "\n";

  auto put = [&out](double v) { out.write(reinterpret_cast<const char*>(&v), sizeof(double)); };
  for (int i = 0; i < n; ++i) {
    put(t.omega(i).real());
    put(t.omega(i).imag());
  }
  for (int i = 0; i < n; ++i) put(t.b_half(i) * t.b_half(i));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      put(t.V(i, j).real());
      put(t.V(i, j).imag());
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

ManifoldTransform read_geometry_token(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  const int n = parse_header(in, "PMFHT-GEO", path);

  auto get = [&in, &path]() {
    double v;
    in.read(reinterpret_cast<char*>(&v), sizeof(double));
    if (!in) throw ParseError(path + ": truncated payload");
    return v;
  };

  ManifoldTransform t;
  t.omega.resize(n);
  for (int i = 0; i < n; ++i) {
    const double re = get();
    const double im = get();
    t.omega(i) = Cplx(re, im);
    if (std::abs(std::abs(t.omega(i)) - 1.0) > 1e-6) {
      throw ParseError(path + ": eigenvalue " + std::to_string(i) + " off the unit circle");
    }
  }
  Vec b(n);
  for (int i = 0; i < n; ++i) {
    b(i) = get();
    if (!(b(i) > 0.0) || !std::isfinite(b(i))) {
      throw ParseError(path + ": non-positive mass entry " + std::to_string(i));
    }
  }
  t.b_half = b.array().sqrt().matrix();
  t.b_half_inv = t.b_half.array().inverse().matrix();
  t.V.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = get();
      const double im = get();
      t.V(i, j) = Cplx(re, im);
    }
  }
  t.theta.resize(n);
  for (int i = 0; i < n; ++i) t.theta(i) = detail::principal_arg(t.omega(i));
  return t;
}

}  // namespace pmfht
