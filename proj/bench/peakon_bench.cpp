// Serial reference paths against the OpenMP kernels. Thread count comes from
// OMP_NUM_THREADS; run with several values to see the scaling.
#include <benchmark/benchmark.h>

#include <cmath>

#include "peakon/reference.hpp"

using namespace peakon;

namespace {

GridFunction sample_function(const GridPtr& g) {
    return GridFunction::sample(g, [](double x) { return std::exp(-0.3 * x * x) * std::cos(x); });
}

void BM_ConvDense(benchmark::State& state, reference::Exec exec) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    const GridFunction f = sample_function(g);
    for (auto _ : state) benchmark::DoNotOptimize(reference::conv_phi_dense(f, exec));
}

void BM_ConvPrefix(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    const GridFunction f = sample_function(g);
    for (auto _ : state) benchmark::DoNotOptimize(conv_phi(f));
}

void BM_HsSerial(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(reference::hs_norm_squared_serial(HsKernel::K1, *g));
}

void BM_HsParallel(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(hs_norm_squared(HsKernel::K1, *g));
}

void BM_DiscretizeSerial(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(reference::discretize_serial(OperatorKind::L, 3.0, g));
}

void BM_DiscretizeParallel(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(discretize(OperatorKind::L, 3.0, g));
}

// With few points the per-point LU wins; the single Schur form pays off on
// full-size scans with hundreds of points.
const LambdaRect kRect{-1.5, 1.5, 7, -0.5, 0.5, 3};

void BM_ScanSerial(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(reference::pseudospectral_scan_serial(OperatorKind::L, 3.0, g, kRect));
}

void BM_ScanParallel(benchmark::State& state) {
    const GridPtr g = build_grid(40, static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(pseudospectral_scan(OperatorKind::L, 3.0, g, kRect));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ConvDense, serial, reference::Exec::serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ConvDense, parallel, reference::Exec::parallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvPrefix)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HsSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HsParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscretizeSerial)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscretizeParallel)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
