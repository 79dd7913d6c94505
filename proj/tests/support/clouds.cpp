#include "support/clouds.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace pmfht::testing {

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

PointCloud fibonacci_sphere(int n, double radius) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  PointCloud cloud;
  cloud.pts.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    cloud.pts(i, 0) = radius * rho * std::cos(phi);
    cloud.pts(i, 1) = radius * rho * std::sin(phi);
    cloud.pts(i, 2) = radius * z;
  }
  return cloud;
}

PointCloud planar_grid(int nx, int ny, double spacing) {
  PointCloud cloud;
  cloud.pts.resize(nx * ny, 3);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int k = i * ny + j;
      cloud.pts(k, 0) = i * spacing;
      cloud.pts(k, 1) = j * spacing;
      cloud.pts(k, 2) = 0.0;
    }
  }
  return cloud;
}

PointCloud hex_patch(int rings, double spacing) {
  std::vector<std::array<double, 2>> sites;
  sites.push_back({0.0, 0.0});
  for (int ring = 1; ring <= rings; ++ring) {
    // walk the hexagon ring corner to corner
    double x = ring * spacing, y = 0.0;
    for (int side = 0; side < 6; ++side) {
      const double angle = kTau * (side + 2) / 6.0;
      const double dx = spacing * std::cos(angle);
      const double dy = spacing * std::sin(angle);
      for (int step = 0; step < ring; ++step) {
        sites.push_back({x, y});
        x += dx;
        y += dy;
      }
    }
  }
  PointCloud cloud;
  cloud.pts.resize(static_cast<Eigen::Index>(sites.size()), 3);
  for (size_t i = 0; i < sites.size(); ++i) {
    cloud.pts(static_cast<Eigen::Index>(i), 0) = sites[i][0];
    cloud.pts(static_cast<Eigen::Index>(i), 1) = sites[i][1];
    cloud.pts(static_cast<Eigen::Index>(i), 2) = 0.0;
  }
  return cloud;
}

PointCloud random_planar_disk(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  cloud.pts.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const double r = std::sqrt(unit(rng));
    const double phi = kTau * unit(rng);
    cloud.pts(i, 0) = r * std::cos(phi);
    cloud.pts(i, 1) = r * std::sin(phi);
    cloud.pts(i, 2) = 0.0;
  }
  return cloud;
}

PointCloud torus_grid(int nu, int nv, double big_r, double small_r) {
  PointCloud cloud;
  cloud.pts.resize(nu * nv, 3);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = kTau * i / nu;
      const double v = kTau * j / nv;
      const int k = i * nv + j;
      cloud.pts(k, 0) = (big_r + small_r * std::cos(v)) * std::cos(u);
      cloud.pts(k, 1) = (big_r + small_r * std::cos(v)) * std::sin(u);
      cloud.pts(k, 2) = small_r * std::sin(v);
    }
  }
  return cloud;
}

PointCloud wavy_sheet(int nx, int ny, double amp) {
  PointCloud cloud;
  cloud.pts.resize(nx * ny, 3);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int k = i * ny + j;
      const double x = static_cast<double>(i) / (nx - 1);
      const double y = static_cast<double>(j) / (ny - 1);
      cloud.pts(k, 0) = x;
      cloud.pts(k, 1) = y;
      cloud.pts(k, 2) = amp * std::sin(kTau * x) * std::cos(kTau * y);
    }
  }
  return cloud;
}

Vec gaussian_signal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = gauss(rng);
  return f;
}

CVec complex_signal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec f(n);
  for (int i = 0; i < n; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    f(i) = Cplx(re, im);
  }
  return f;
}

}  // namespace pmfht::testing
