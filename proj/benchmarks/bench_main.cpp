#include <benchmark/benchmark.h>

#include "resonwave/expansion.hpp"
#include "resonwave/jost.hpp"
#include "resonwave/oracle.hpp"
#include "resonwave/resolvent.hpp"
#include "resonwave/resonances.hpp"

using namespace resonwave;

namespace {

PotentialSpec matrix_v() {
  CMatrix v(2, 2);
  v << 5.0, 1.0, 0.0, cplx(-3.0, 1.0);
  return PotentialSpec::matrix_well(v);
}

LocalizedState bump(const UniformGrid& g, double center, double width) {
  StateSpec s;
  s.shape = "bump";
  s.params = {{"center", center}, {"width", width}};
  return sample_state(s, g, 1);
}

}  // namespace

static void BM_JostScalarWell(benchmark::State& state) {
  const auto V = PotentialSpec::square_well(5.0);
  cplx l{-1.2, 1.8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(jost_scaled(l, V));
    l += cplx(1e-9, 0.0);
  }
}
BENCHMARK(BM_JostScalarWell);

static void BM_JostMatrixWell(benchmark::State& state) {
  const auto V = matrix_v();
  cplx l{-1.2, 1.8};
  for (auto _ : state) {
    benchmark::DoNotOptimize(jost_scaled(l, V));
    l += cplx(1e-9, 0.0);
  }
}
BENCHMARK(BM_JostMatrixWell);

// R(lambda) f on a window grid, |lambda| spanning the Bromwich range
static void BM_ResolventApply(benchmark::State& state) {
  const UniformGrid g{-10.0, 10.0, 1281};
  const auto V = PotentialSpec::square_well(5.0);
  const ResolventWorkspace ws(bump(g, 0.0, 0.8), window_grid(g, 2), V);
  const cplx l{2.7, static_cast<double>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(ws.apply(l));
}
BENCHMARK(BM_ResolventApply)->Arg(1)->Arg(64)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_CountZerosWell(benchmark::State& state) {
  const auto V = PotentialSpec::square_well(5.0);
  ScanRegion r;
  r.re_min = -2.5;
  r.re_max = 3.0;
  r.im_min = -9.5;
  r.im_max = 9.5;
  for (auto _ : state) benchmark::DoNotOptimize(count_zeros(r, V));
}
BENCHMARK(BM_CountZerosWell)->Unit(benchmark::kMillisecond);

static void BM_ScanMatrixWell(benchmark::State& state) {
  const auto V = matrix_v();
  ScanRegion r;
  r.re_min = -2.0137;
  r.re_max = 3.0213;
  r.im_min = -4.0119;
  r.im_max = 4.0171;
  for (auto _ : state) benchmark::DoNotOptimize(scan(r, V, ContourSpec{}));
}
BENCHMARK(BM_ScanMatrixWell)->Unit(benchmark::kMillisecond);

static void BM_LeapfrogFree(benchmark::State& state) {
  const UniformGrid g = UniformGrid::with_spacing(-6.0, 6.0, 1.0 / 256);
  const auto f = bump(g, 0.0, 1.0);
  const LocalizedState zero = state_from_field(Field(g, 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(timestep_wave(2.0, f, zero, PotentialSpec::free(), g.spacing() / 4));
}
BENCHMARK(BM_LeapfrogFree)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
