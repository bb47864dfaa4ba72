#include <benchmark/benchmark.h>

#include "csl/spectral.hpp"

using namespace csl;

namespace {

FemSystem disk_system(int res) {
  const Mesh m = generate_disk(1.0, res);
  return assemble(m, pullback(m));
}

}  // namespace

static void BM_Neumann(benchmark::State& state) {
  const FemSystem sys = disk_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(neumann_spectrum(sys, 5));
  state.counters["dofs"] = sys.size();
}
BENCHMARK(BM_Neumann)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Dirichlet(benchmark::State& state) {
  const FemSystem sys = disk_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_spectrum(sys, 5));
}
BENCHMARK(BM_Dirichlet)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Steklov(benchmark::State& state) {
  const FemSystem sys = disk_system(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(steklov_spectrum(sys, 5));
}
BENCHMARK(BM_Steklov)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
