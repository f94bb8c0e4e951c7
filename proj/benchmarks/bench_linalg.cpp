#include <benchmark/benchmark.h>

#include "wcperiod/catalog.hpp"
#include "wcperiod/kernels.hpp"
#include "wcperiod/linalg.hpp"

using namespace wcperiod;

static void BM_MatrixExponential(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ComplexMatrix a = ComplexMatrix::Random(n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(matrix_exponential(a, 1.0));
    }
}
BENCHMARK(BM_MatrixExponential)->Arg(2)->Arg(4)->Arg(8)->Arg(32);

static void BM_Spectrum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ComplexMatrix a = ComplexMatrix::Random(n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum(a));
    }
}
BENCHMARK(BM_Spectrum)->Arg(2)->Arg(8)->Arg(32);

static void BM_ComputeM(benchmark::State& state) {
    const NormKind norm = static_cast<NormKind>(state.range(0));
    const GreenKernelODE kernel(catalog::planar_matrix(), catalog::antiperiodic_pi(norm));
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_M(kernel).value);
    }
}
BENCHMARK(BM_ComputeM)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
