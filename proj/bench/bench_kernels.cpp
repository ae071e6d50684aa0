// Serial reference loops against their OpenMP counterparts.
//
//   bench_kernels --benchmark_filter=MapGrid
//
// With OMP_NUM_THREADS=1 the pairs should time alike; the gap at higher
// thread counts is the parallel speedup.

#include <benchmark/benchmark.h>

#include "gldlmom/atlas.hpp"
#include "gldlmom/simbench.hpp"

namespace {

using namespace gldlmom;

template <auto Map>
void BM_MapGrid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LambdaGrid g = build_grid(Region::R3, {n, n});
  for (auto _ : state) benchmark::DoNotOptimize(Map(g));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * n));
}

template <auto Find>
void BM_BoundaryPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TauGrid t = map_grid(build_grid(Region::R4, {n, n}));
  for (auto _ : state) benchmark::DoNotOptimize(Find(t));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n * n));
}

template <auto Run>
void BM_Simulation(benchmark::State& state) {
  SimConfig c;
  c.replications = static_cast<std::size_t>(state.range(0));
  c.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(Run(c));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * state.range(0));
}

BENCHMARK(BM_MapGrid<map_grid_serial>)->Name("MapGrid/serial")->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MapGrid<map_grid>)->Name("MapGrid/omp")->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundaryPoints<potential_boundary_points_serial>)
    ->Name("BoundaryPoints/serial")
    ->Arg(512)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundaryPoints<potential_boundary_points>)
    ->Name("BoundaryPoints/omp")
    ->Arg(512)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulation<run_simulation_serial>)->Name("Simulation/serial")->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Simulation<run_simulation>)->Name("Simulation/omp")->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
