#include "semiwave/convolution.hpp"
#include "semiwave/green.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/projection.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace semiwave;

namespace {

std::vector<double> front(std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 1.0 / (1.0 + std::exp(-(static_cast<double>(i) - 0.5 * static_cast<double>(n)) * 0.05));
    return v;
}

void BM_SampleProjection(benchmark::State& state)
{
    auto k = kernels::make_separable_kernel(kernels::Law1D::exponential(1.0), kernels::Law1D::gaussian(0.0, 1.0));
    auto pk = kernels::projection(k, 1.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(numerics::sample_projection(pk, 0.05, 4000).total());
}
BENCHMARK(BM_SampleProjection)->Unit(benchmark::kMillisecond);

void BM_ConvolveK2(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    auto k = kernels::make_separable_kernel(kernels::Law1D::exponential(1.0), kernels::Law1D::gaussian(0.0, 1.0));
    auto s = numerics::sample_projection(kernels::projection(k, 1.8), 0.05, static_cast<long>(n));
    auto v = front(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        numerics::convolve(s, v, {}, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(static_cast<long>(n));
}
BENCHMARK(BM_ConvolveK2)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMicrosecond);

void BM_ConvolveGreen(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    auto k1 = kernels::ExponentialGreen::for_profile(1.8, 3.0);
    auto v = front(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        numerics::convolve_green(k1, 0.05, v, {}, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetComplexityN(static_cast<long>(n));
}
BENCHMARK(BM_ConvolveGreen)->RangeMultiplier(4)->Range(256, 262144)->Complexity(benchmark::oN);

} // namespace
