// Serial vs OpenMP timings for the parallel kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "penning/constants.hpp"
#include "penning/kernels.hpp"
#include "penning/protocols.hpp"
#include "penning/spectral.hpp"

using namespace penning;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_PartialScan(benchmark::State& state) {
  const std::vector<double> grid = partial_t3_grid(1.0, 32);
  for (auto _ : state) benchmark::DoNotOptimize(partial_protocol_scan(1.0, grid, 1e-3, 8, mode(state)));
  label(state);
}

void BM_FringeScan(benchmark::State& state) {
  const HilbertSpace space(8);
  const QuantumState prepared = ghz_prepare(1.0, 10.0, Elimination::effective).final_state;
  const OperatorMatrix readout = ideal_ghz_pi2(space);
  const std::vector<double> phases = periodic_phase_grid(1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(fringe_scan(prepared, readout, phases, mode(state)));
  label(state);
}

void BM_DominantFrequency(benchmark::State& state) {
  const double dt = 1e-3;
  std::vector<std::complex<double>> samples(1 << 16);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    samples[k] = std::polar(1.0, 7.3 * dt * static_cast<double>(k)) + 0.2 * std::polar(1.0, 2.1 * dt * k);
  }
  for (auto _ : state) benchmark::DoNotOptimize(dominant_frequency(samples, dt, 1.0, 20.0, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_PartialScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FringeScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DominantFrequency)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
