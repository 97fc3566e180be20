#include "derived.hpp"
#include "oracles.hpp"
#include "setups.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/operators.hpp"
#include "semiwave/problem.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace semiwave;
using namespace semiwave::profile;
using kernels::Law1D;
namespace oracle = semiwave::fixtures::oracle;
namespace derived = semiwave::fixtures::derived;

namespace {

const WaveProblem& benchmark_problem()
{
    static const WaveProblem p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(),
                                              1.5 * derived::benchmark_c_star);
    return p;
}

// Nodes at least one margin away from the left end.
std::size_t first_interior(const WaveProblem& p)
{
    return static_cast<std::size_t>(std::ceil(p.margin() / p.grid.h));
}

} // namespace

TEST(Problem, BenchmarkParameters)
{
    const auto& p = benchmark_problem();
    EXPECT_DOUBLE_EQ(p.beta, 3.0);
    EXPECT_TRUE(p.admissible);
    EXPECT_GT(p.m, p.lambda);
    EXPECT_NEAR(p.U, 2.0, 1e-14);
    // L = g'(0) and inf f' = f'(0), so chi_L and chi_0 share the leftmost root.
    EXPECT_NEAR(p.lambda, oracle::benchmark_lambda1(p.c), 1e-8);
    auto chiL = chi_L(p.nl, p.kernel);
    EXPECT_LT(dispersion::eval_R(chiL, p.m, p.c), 0.0);
    EXPECT_NEAR(p.grid.t(static_cast<std::size_t>(std::llround(-p.grid.t_min / p.grid.h))), 0.0, 1e-12);
}

TEST(SubSuper, Properties)
{
    const auto& p = benchmark_problem();
    auto env = sub_super(p);
    ASSERT_EQ(env.lower.size(), p.grid.n);
    ASSERT_EQ(env.upper.size(), p.grid.n);
    for (std::size_t i = 0; i < p.grid.n; ++i) {
        double t = p.grid.t(i);
        EXPECT_GE(env.lower[i], 0.0);
        EXPECT_LE(env.lower[i], env.upper[i]);
        if (t >= 0.0)
            EXPECT_EQ(env.lower[i], 0.0);
        if (std::abs(t) < 0.5 * p.grid.h) {
            EXPECT_NEAR(env.upper[i], p.delta, 1e-14);
        }
        if (t < 0.0 && t > -30.0)
            EXPECT_GT(env.lower[i], 0.0) << t;
    }
}

TEST(SubSuper, LowerMaximumLocation)
{
    const auto& p = benchmark_problem();
    auto env = sub_super(p);
    auto it = std::max_element(env.lower.begin(), env.lower.end());
    double t_grid = p.grid.t(static_cast<std::size_t>(it - env.lower.begin()));
    double t_star = std::log(p.lambda / p.m) / (p.m - p.lambda);
    EXPECT_NEAR(t_grid, t_star, p.grid.h);
}

TEST(ApplyG, ZeroAndEquilibrium)
{
    const auto& p = benchmark_problem();
    std::vector<double> zero(p.grid.n, 0.0);
    for (double x : apply_G(p, zero))
        EXPECT_EQ(x, 0.0);
    for (double x : apply_A(p, zero))
        EXPECT_EQ(x, 0.0);

    const double kappa = 1.0;
    std::vector<double> k(p.grid.n, kappa);
    auto G = apply_G(p, k);
    auto A = apply_A(p, k);
    for (std::size_t i = first_interior(p); i < p.grid.n; ++i) {
        ASSERT_NEAR(G[i], p.beta * kappa, 1e-9) << i;
        ASSERT_NEAR(A[i], kappa, 1e-9) << i;
    }
}

TEST(ApplyG, SpikeThroughDiscreteDelay)
{
    // K = Dirac(0.25) x Dirac(0): k2 is a unit atom at r = 0.5 = 2 h at c = 2.
    auto k = kernels::make_separable_kernel(Law1D::dirac(0.25), Law1D::dirac(0.0));
    ProblemOptions opt;
    opt.grid.t_min = -2.0;
    opt.grid.t_max = 1.75;
    opt.grid.h = 0.25;
    auto p = make_problem(fixtures::benchmark_nl(), k, 2.0, opt);
    ASSERT_EQ(p.grid.n, 16u);
    std::vector<double> v(16, 0.0);
    v[5] = 0.4;
    auto G = apply_G(p, v);
    std::vector<double> g(16);
    for (std::size_t i = 0; i < 16; ++i)
        g[i] = p.nl.g(v[i]);
    auto conv = oracle::direct_convolution(g, [](long m) { return m == 2 ? 1.0 : 0.0; });
    for (std::size_t i = 0; i < 16; ++i) {
        double fb = p.beta * v[i] - p.nl.f(v[i]);
        EXPECT_NEAR(G[i], conv[i] + fb, 1e-15) << i;
    }
    EXPECT_NEAR(G[7], 2 * 0.4 / 1.4, 1e-15);
}

TEST(ApplyL, SuperSolutionIsReproduced)
{
    const auto& p = benchmark_problem();
    auto env = sub_super(p);
    auto L = apply_L(p, env.upper);
    double worst = 0.0;
    for (std::size_t i = first_interior(p); i < p.grid.n; ++i) {
        if (p.grid.t(i) > 0.0)
            break;
        worst = std::max(worst, std::abs(L[i] - env.upper[i]) / p.delta);
    }
    // Hat integration of the exponential is second order in h.
    EXPECT_LT(worst, 1e-5);
}

TEST(ApplyA, MapsSandwichIntoItself)
{
    const auto& p = benchmark_problem();
    auto env = sub_super(p);
    std::vector<double> start(p.grid.n);
    for (std::size_t i = 0; i < p.grid.n; ++i)
        start[i] = std::min(env.upper[i], p.U);
    auto A = apply_A(p, start, Branch::Regularized);
    for (std::size_t i = first_interior(p); i < p.grid.n; ++i) {
        ASSERT_GE(A[i], env.lower[i] - 1e-5) << i;
        ASSERT_LE(A[i], std::min(env.upper[i], p.U) + 1e-5) << i;
    }
}

TEST(Problem, NoAdmissibleMBelowCritical)
{
    auto p = make_problem(fixtures::benchmark_nl(), fixtures::benchmark_kernel(), 0.5 * derived::benchmark_c_star);
    EXPECT_FALSE(p.admissible);
    EXPECT_FALSE(p.warnings.empty());
    EXPECT_THROW(sub_super(p), NoAdmissibleM);
    auto env = envelopes(p);
    for (double x : env.lower)
        EXPECT_EQ(x, 0.0);
}
