#include "q2d/gp.hpp"
#include "q2d/gp3d.hpp"
#include "q2d/potential.hpp"

#include <benchmark/benchmark.h>

using namespace q2d;

// Ng in units of 1/10 so the argument stays integral.
static void BM_gp2d_harmonic(benchmark::State &state) {
  const Potential trap = Potential::harmonic();
  const double Ng = state.range(0) / 10.0;
  int iterations = 0;
  for (auto _ : state) {
    const GPState s = minimize_gp2d(trap, Ng);
    iterations = s.iterations;
    benchmark::DoNotOptimize(s.energy);
  }
  state.counters["flow_iterations"] = iterations;
}
BENCHMARK(BM_gp2d_harmonic)->Arg(0)->Arg(10)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

// Coarse grids (dr = 1/200, dz = h/40, 4 modes); the default grids take ~20 s.
static void BM_gp3d_coarse(benchmark::State &state) {
  const Potential trap = Potential::harmonic(), vperp = Potential::harmonic();
  GP3DOptions o;
  o.dr = 1.0 / 200;
  o.dz = 0.2 / 40;
  o.modes = 4;
  o.keep_state = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(minimize_gp3d(trap, vperp, 0.2, state.range(0) / 10.0, o).state.energy);
}
BENCHMARK(BM_gp3d_coarse)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);
