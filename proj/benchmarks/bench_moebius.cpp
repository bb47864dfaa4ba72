#include <benchmark/benchmark.h>

#include "csl/moebius.hpp"

using namespace csl;

static void BM_SphericalVolume(benchmark::State& state) {
  const Mesh m = generate_disk(1.0, static_cast<int>(state.range(0)));
  const Immersion phi = Immersion::of(m);
  for (auto _ : state) benchmark::DoNotOptimize(spherical_volume(phi, m));
  state.counters["faces"] = m.num_triangles();
}
BENCHMARK(BM_SphericalVolume)->Arg(32)->Arg(64);

static void BM_SphericalVolumeExact(benchmark::State& state) {
  const Mesh m = generate_disk(1.0, static_cast<int>(state.range(0)));
  const Immersion phi = Immersion::of(m);
  for (auto _ : state) benchmark::DoNotOptimize(spherical_volume_exact(phi, m));
  state.counters["faces"] = m.num_triangles();
}
BENCHMARK(BM_SphericalVolumeExact)->Arg(32)->Arg(64);

static void BM_SupVolumeSearch(benchmark::State& state) {
  RibbonSpec s;
  s.skeleton = circle_skeleton(1.0, 128);
  s.width = 0.05;
  s.half_twists = 1;
  const Mesh ribbon = generate_ribbon(s);
  SearchBudget b;
  b.max_evaluations = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sup_volume_search(Immersion::of(ribbon), ribbon, b));
}
BENCHMARK(BM_SupVolumeSearch)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_HerschBalance(benchmark::State& state) {
  const Mesh m = generate_disk(1.0, 32);
  Immersion shifted{m.vertices()};
  shifted.points.col(0).array() += 0.7;
  const Eigen::MatrixXd pts = to_sphere(shifted);
  const std::vector<double> w(static_cast<std::size_t>(pts.rows()), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hersch_balance(pts, w));
}
BENCHMARK(BM_HerschBalance)->Unit(benchmark::kMillisecond);
