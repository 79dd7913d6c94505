// Microbenchmarks for the hot paths: operator assembly, the eigensolves, and
// the factored fractional transform application.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pmfht/geometry.hpp"
#include "pmfht/radar.hpp"
#include "pmfht/transform.hpp"

namespace {

using namespace pmfht;

PointCloud fibonacci_sphere(int n) {
  PointCloud cloud;
  cloud.pts.resize(n, 3);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = 2.0 * M_PI * i / golden;
    cloud.pts.row(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return cloud;
}

const ManifoldTransform& cached_transform(int n) {
  static std::map<int, ManifoldTransform> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const LboPair lbo = build_lbo(fibonacci_sphere(n));
    it = cache.emplace(n, build_transform(solve_harmonic_basis(lbo), lbo)).first;
  }
  return it->second;
}

Vec random_signal(int n) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss;
  Vec f(n);
  for (int i = 0; i < n; ++i) f(i) = gauss(rng);
  return f;
}

void BM_BuildLbo(benchmark::State& state) {
  const PointCloud cloud = fibonacci_sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_lbo(cloud));
}
BENCHMARK(BM_BuildLbo)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_HarmonicBasis(benchmark::State& state) {
  const LboPair lbo = build_lbo(fibonacci_sphere(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_harmonic_basis(lbo));
}
BENCHMARK(BM_HarmonicBasis)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_BuildTransform(benchmark::State& state) {
  const LboPair lbo = build_lbo(fibonacci_sphere(static_cast<int>(state.range(0))));
  const HarmonicBasis basis = solve_harmonic_basis(lbo);
  for (auto _ : state) benchmark::DoNotOptimize(build_transform(basis, lbo));
}
BENCHMARK(BM_BuildTransform)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ManifoldTransform& t = cached_transform(n);
  const Mat f = random_signal(n);
  for (auto _ : state) benchmark::DoNotOptimize(forward(t, 0.37, f));
}
BENCHMARK(BM_Forward)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMicrosecond);

void BM_RoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ManifoldTransform& t = cached_transform(n);
  const Mat f = random_signal(n);
  for (auto _ : state) benchmark::DoNotOptimize(inverse(t, forward(t, 0.37, f)));
}
BENCHMARK(BM_RoundTrip)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_FractionalMatrix(benchmark::State& state) {
  const ManifoldTransform& t = cached_transform(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fractional_matrix(t, 0.37));
}
BENCHMARK(BM_FractionalMatrix)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_FilterDesign(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ManifoldTransform& t = cached_transform(n);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::vector<Realization> pairs(4);
  for (auto& pair : pairs) {
    pair.x = random_signal(n);
    pair.y = pair.x;
    for (int i = 0; i < n; ++i) pair.y(i) += 0.3 * gauss(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(design_filter(t, 0.5, pairs));
}
BENCHMARK(BM_FilterDesign)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_ApplyFilter(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ManifoldTransform& t = cached_transform(n);
  std::vector<Realization> pairs(1);
  pairs[0].x = random_signal(n);
  pairs[0].y = pairs[0].x;
  const FilterDesign design = design_filter(t, 0.5, pairs);
  const Vec y = random_signal(n);
  for (auto _ : state) benchmark::DoNotOptimize(apply_filter(t, design, y));
}
BENCHMARK(BM_ApplyFilter)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
