#include <benchmark/benchmark.h>

#include "kappa/grid.hpp"
#include "kappa/rieffel.hpp"
#include "kappa/symbolic.hpp"
#include "kappa/trace.hpp"

namespace {

using kappa::Element;
using kappa::GridSpec;
using kappa::SpectralGrid;

GridSpec square_spec(int cells) {
  GridSpec sp;
  sp.v_cells = cells;
  sp.beta_cells = cells;
  return sp;
}

void bm_symbolic_star(benchmark::State& state) {
  const double kp = 1.0;
  Element f = Element::coordinate_t() + Element::plane_wave(0.7, -0.3, 0.2);
  Element g = Element::coordinate_x() + Element::plane_wave(-0.4, 0.9, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa::star_mul(f, g, kp));
  }
}
BENCHMARK(bm_symbolic_star);

void bm_grid_star(benchmark::State& state) {
  const GridSpec sp = square_spec(static_cast<int>(state.range(0)));
  const SpectralGrid f = kappa::make_gaussian(sp, 1.1, 0.25, 0.5, 0.3, 1.0);
  const SpectralGrid g = kappa::make_gaussian(sp, 0.9, -0.2, 0.45, -0.25, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa::grid_star(f, g, 1.0));
  }
}
BENCHMARK(bm_grid_star)->Arg(64)->Arg(128)->Arg(256);

void bm_grid_involution(benchmark::State& state) {
  const GridSpec sp = square_spec(256);
  const SpectralGrid f = kappa::make_gaussian(sp, 1.0, 0.0, 0.3, 0.2, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa::grid_involution(f, 1.0));
  }
}
BENCHMARK(bm_grid_involution);

void bm_rieffel_star_column(benchmark::State& state) {
  const GridSpec sp = square_spec(256);
  const SpectralGrid f = kappa::make_gaussian(sp, 1.1, 0.25, 0.5, 0.3, 1.0);
  const SpectralGrid g = kappa::make_gaussian(sp, 0.9, -0.2, 0.45, -0.25, 0.9);
  kappa::RieffelOptions opt;
  opt.beta_lo = 128;
  opt.beta_hi = 128;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa::rieffel_star_rows(f, g, 1.0, opt));
  }
}
BENCHMARK(bm_rieffel_star_column);

void bm_cocycle(benchmark::State& state) {
  kappa::GridAlgebra alg;
  alg.spec = square_spec(128);
  const SpectralGrid f0 = kappa::make_bump(alg.spec, 1.0, 0.05, 0.8, 0.2, 1.0);
  const SpectralGrid f1 = kappa::make_bump(alg.spec, 0.8, -0.1, 0.7, -0.3, 0.9);
  const SpectralGrid f2 = kappa::make_bump(alg.spec, 1.2, 0.0, 0.9, 0.1, 1.1);
  const SpectralGrid f3 = kappa::make_bump(alg.spec, 0.9, 0.1, 0.6, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa::cocycle_phi(alg, f0, f1, f2, f3));
  }
}
BENCHMARK(bm_cocycle);

}  // namespace

BENCHMARK_MAIN();
