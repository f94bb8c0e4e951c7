#include <numbers>

#include <benchmark/benchmark.h>

#include "wcperiod/catalog.hpp"
#include "wcperiod/ode_solver.hpp"
#include "wcperiod/spectral.hpp"

using namespace wcperiod;

static void BM_PicardPlanar(benchmark::State& state) {
    const GreenKernelODE kernel(catalog::planar_matrix(), catalog::antiperiodic_pi(NormKind::L2));
    const NonlinearitySpec g = catalog::planar_trig(0.2, NormKind::L2);
    PicardOptions options;
    options.grid_size = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(picard_solve(kernel, g, options).iterations);
    }
}
BENCHMARK(BM_PicardPlanar)->Arg(129)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

static void BM_PoincarePlanar(benchmark::State& state) {
    const GreenKernelODE kernel(catalog::planar_matrix(), catalog::antiperiodic_pi(NormKind::L2));
    const NonlinearitySpec g = catalog::planar_trig(0.2, NormKind::L2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(poincare_solve(kernel, g).iterations);
    }
}
BENCHMARK(BM_PoincarePlanar)->Unit(benchmark::kMillisecond);

static void BM_MildHeat(benchmark::State& state) {
    const DiagonalGenerator gen = DiagonalGenerator::heat_dirichlet(static_cast<int>(state.range(0)));
    const FieldNonlinearity field = catalog::heat_cubic(1.0, 0.5);
    const PeriodicitySpec spec{std::numbers::pi, Complex(-1.0, 0.0), NormKind::L2};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mild_picard_solve(gen, field, spec).iterations);
    }
}
BENCHMARK(BM_MildHeat)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
