#include "derived.hpp"
#include "oracles.hpp"
#include "setups.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/operators.hpp"
#include "semiwave/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace semiwave;
using namespace semiwave::profile;
namespace oracle = semiwave::fixtures::oracle;
namespace derived = semiwave::fixtures::derived;

namespace {

ProblemOptions coarse(double h = 0.1)
{
    ProblemOptions opt;
    opt.grid.h = h;
    return opt;
}

const WaveProblem& benchmark_problem()
{
    static const WaveProblem p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(),
                                              1.5 * derived::benchmark_c_star, coarse());
    return p;
}

const SolveResult& benchmark_solution()
{
    static const SolveResult r = solve_profile(benchmark_problem());
    return r;
}

} // namespace

TEST(Solve, BenchmarkConverges)
{
    const auto& p = benchmark_problem();
    const auto& r = benchmark_solution();
    ASSERT_EQ(r.status, SolveStatus::Converged);
    const auto& prof = r.profile;
    EXPECT_TRUE(prof.converged);
    EXPECT_LT(prof.residual_sup, 1e-4);
    EXPECT_LE(*std::max_element(prof.values.begin(), prof.values.end()), p.U + 1e-9);
    EXPECT_NEAR(prof.values.back(), derived::benchmark_kappa, 1e-6);
    EXPECT_NEAR(prof.tail_rate / oracle::benchmark_lambda1(p.c), 1.0, 0.05);
    for (double x : prof.values)
        EXPECT_GE(x, 0.0);
}

TEST(Solve, ClipsVanishAtTheEnd)
{
    const auto& recs = benchmark_solution().trace.records;
    ASSERT_GE(recs.size(), 10u);
    for (std::size_t i = recs.size() - 10; i < recs.size(); ++i)
        EXPECT_EQ(recs[i].clip_count, 0u) << i;
    EXPECT_EQ(recs.size(), benchmark_solution().profile.iterations);
}

TEST(Solve, Persistence)
{
    const auto& p = benchmark_problem();
    const auto& prof = benchmark_solution().profile;
    EXPECT_TRUE(persistence_check(prof, 0.5 * derived::benchmark_kappa, p.margin()));
    Profile zero = prof;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    EXPECT_FALSE(persistence_check(zero, 0.5));
    // The check only looks at the right quarter and at positivity.
    Profile left_flat = prof;
    for (std::size_t i = 0; i < left_flat.values.size() / 2; ++i)
        left_flat.values[i] = std::min(left_flat.values[i], 1e-3);
    EXPECT_TRUE(persistence_check(left_flat, 0.5, p.margin()));
}

TEST(Solve, TranslationNormalization)
{
    const auto& prof = benchmark_solution().profile;
    auto moved = normalize_translation(prof, 0.5);
    EXPECT_NEAR(interpolate(moved, 0.0), 0.5, 1e-3);
    Profile zero = prof;
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    EXPECT_THROW(normalize_translation(zero, 0.5), InvalidParameter);
}

TEST(Solve, EquilibriumHasSmallResidual)
{
    const auto& p = benchmark_problem();
    Profile flat;
    flat.grid = p.grid;
    flat.c = p.c;
    flat.values.assign(p.grid.n, derived::benchmark_kappa);
    EXPECT_LT(residual_ode(p, flat), 1e-6);
}

TEST(Solve, ZeroStartWithoutLowerBarrierStaysZero)
{
    auto p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(), 0.5 * derived::benchmark_c_star,
                          coarse(0.2));
    ASSERT_FALSE(p.admissible);
    SolveOptions opt;
    opt.max_iter = 50;
    auto r = solve_profile(p, opt, std::vector<double>(p.grid.n, 0.0));
    for (double x : r.profile.values)
        ASSERT_EQ(x, 0.0);
    EXPECT_FALSE(persistence_check(r.profile, 0.5));
}

TEST(Solve, BelowCriticalIsFlagged)
{
    auto p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(), 0.5 * derived::benchmark_c_star,
                          coarse(0.2));
    SolveOptions opt;
    opt.max_iter = 200;
    auto r = solve_profile(p, opt);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_FALSE(r.status == SolveStatus::Converged && persistence_check(r.profile, 0.5, p.margin()) &&
                 r.profile.residual_sup < 1e-4);
}

TEST(Solve, CheckedThrowsWhenCut)
{
    SolveOptions opt;
    opt.max_iter = 2;
    opt.polish = false;
    EXPECT_THROW(solve_profile_checked(benchmark_problem(), opt), NotConverged);
}

TEST(Solve, RegularizationLevelConverges)
{
    auto gap = [](int n) {
        ProblemOptions opt = coarse(0.2);
        opt.reg_n = n;
        auto p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(),
                              1.5 * derived::benchmark_c_star, opt);
        auto r = solve_profile(p);
        double d = 0.0;
        for (std::size_t i = 0; i < p.grid.n; ++i)
            d = std::max(d, std::abs(r.regularized[i] - r.profile.values[i]));
        return d;
    };
    double g100 = gap(100);
    double g1000 = gap(1000);
    EXPECT_LT(g1000, 0.1 * g100);
    EXPECT_LT(g100, 2.0 / 100.0);
}
