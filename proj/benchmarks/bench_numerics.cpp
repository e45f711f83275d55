#include "q2d/numerics/grid.hpp"
#include "q2d/numerics/radial_ode.hpp"
#include "q2d/numerics/tridiagonal.hpp"
#include "q2d/potential.hpp"
#include "q2d/scattering.hpp"
#include "q2d/transverse.hpp"

#include <benchmark/benchmark.h>

using namespace q2d;
using namespace q2d::numerics;

static void BM_eigs_harmonic(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid1D grid = Grid1D::uniform(-8.0, 8.0, n);
  const auto v = [](double x) { return x * x; };
  for (auto _ : state)
    benchmark::DoNotOptimize(eigs_sturm_liouville(v, grid, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_eigs_harmonic)->Arg(1001)->Arg(4001)->Arg(16001)->Arg(64001)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_transverse(benchmark::State &state) {
  const Potential v = Potential::harmonic();
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_transverse(v));
}
BENCHMARK(BM_transverse)->Unit(benchmark::kMillisecond);

static void BM_radial_ode(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid1D grid = Grid1D::uniform(1e-6, 10.0, n);
  const auto q = [](double r) { return r < 1.0 ? 8.0 : 0.0; };
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_radial_ode(q, grid, 0.0, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_radial_ode)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Unit(benchmark::kMicrosecond)->Complexity();

static void BM_scattering_3d(benchmark::State &state) {
  const Potential v = Potential::square_barrier(8.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_scattering_3d(v));
}
BENCHMARK(BM_scattering_3d)->Unit(benchmark::kMillisecond);

static void BM_tridiagonal_solve(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> lo(n - 1, -1.0), up(n - 1, -1.0), d(n, 2.5), b(n, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_tridiagonal(lo, d, up, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_tridiagonal_solve)->RangeMultiplier(8)->Range(1 << 10, 1 << 19)->Complexity();
