#include <benchmark/benchmark.h>

#include "csl/spectral.hpp"

using namespace csl;

static void BM_GenerateDisk(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_disk(1.0, res));
}
BENCHMARK(BM_GenerateDisk)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Assemble(benchmark::State& state) {
  const Mesh m = generate_disk(1.0, static_cast<int>(state.range(0)));
  const ConformalMetric g = pullback(m);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(m, g));
  state.counters["dofs"] = m.num_vertices();
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
