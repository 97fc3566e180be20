#include "semiwave/dispersion.hpp"
#include "semiwave/nonlinearity.hpp"
#include "semiwave/problem.hpp"
#include "semiwave/solver.hpp"

#include <benchmark/benchmark.h>

using namespace semiwave;

namespace {

profile::WaveProblem benchmark_problem(double h)
{
    auto nl = profile::make_nonlinearity(profile::families::linear_f(1.0), profile::families::beverton_holt(2.0));
    auto k = kernels::make_separable_kernel(kernels::Law1D::exponential(1.0), kernels::Law1D::gaussian(0.0, 1.0));
    double c_star = dispersion::minimal_speed(profile::chi_L(nl, k)).c_min;
    profile::ProblemOptions opt;
    opt.grid.h = h;
    return profile::make_problem(nl, k, 1.5 * c_star, opt);
}

void BM_MakeProblem(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(benchmark_problem(0.05).grid.n);
}
BENCHMARK(BM_MakeProblem)->Unit(benchmark::kMillisecond);

void BM_SolveProfile(benchmark::State& state)
{
    const double h = 0.4 / static_cast<double>(state.range(0));
    auto p = benchmark_problem(h);
    for (auto _ : state) {
        auto r = profile::solve_profile(p);
        benchmark::DoNotOptimize(r.profile.values.data());
        state.counters["iterations"] = static_cast<double>(r.profile.iterations);
    }
    state.counters["nodes"] = static_cast<double>(p.grid.n);
}
BENCHMARK(BM_SolveProfile)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->Iterations(1);

} // namespace
