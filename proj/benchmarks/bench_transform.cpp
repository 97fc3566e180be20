#include "semiwave/dispersion.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/projection.hpp"

#include <benchmark/benchmark.h>

using namespace semiwave;

namespace {

kernels::Kernel marine() { return kernels::make_marine_kernel(0.02, 100.0, 0.001); }

kernels::Kernel benchmark_kernel()
{
    return kernels::make_separable_kernel(kernels::Law1D::exponential(1.0), kernels::Law1D::gaussian(0.0, 1.0));
}

void BM_MarineClosedForm(benchmark::State& state)
{
    auto k = marine();
    double z = 0.5 * k.domain(3.0).z_hi;
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::transform(k, z, 3.0));
}
BENCHMARK(BM_MarineClosedForm);

void BM_MarineQuadrature(benchmark::State& state)
{
    auto k = marine();
    double z = 0.5 * k.domain(3.0).z_hi;
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::transform_quadrature(k, z, 3.0));
}
BENCHMARK(BM_MarineQuadrature)->Unit(benchmark::kMillisecond);

void BM_SeparableQuadrature(benchmark::State& state)
{
    auto k = benchmark_kernel();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::transform_quadrature(k, 0.4, 1.5));
}
BENCHMARK(BM_SeparableQuadrature)->Unit(benchmark::kMicrosecond);

void BM_MarineProjectK2(benchmark::State& state)
{
    auto k = marine();
    double r = 50.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::project_k2(k, 3.0, r));
        r = r == 50.0 ? 51.0 : 50.0;
    }
}
BENCHMARK(BM_MarineProjectK2)->Unit(benchmark::kMicrosecond);

void BM_MinimalSpeedMarine(benchmark::State& state)
{
    dispersion::DispersionFunction d(0.05, 2.0, marine());
    for (auto _ : state)
        benchmark::DoNotOptimize(dispersion::minimal_speed(d).c_min);
}
BENCHMARK(BM_MinimalSpeedMarine)->Unit(benchmark::kMillisecond);

} // namespace
