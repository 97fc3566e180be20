#include "oracles.hpp"
#include "setups.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/nonlinearity.hpp"
#include "semiwave/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace semiwave;
using namespace semiwave::profile;
namespace oracle = semiwave::fixtures::oracle;

TEST(Validate, BenchmarkPasses)
{
    auto nl = fixtures::benchmark_nl();
    auto rep = validate_hypotheses(nl);
    EXPECT_TRUE(rep.all_pass());
    double kappa = oracle::bisect([&](double s) { return nl.f(s) - nl.g(s); }, 0.5, 3.0);
    EXPECT_NEAR(kappa, 1.0, 1e-12);
}

TEST(Validate, LinearMajorantFailsBelowSlope)
{
    auto nl = make_nonlinearity(families::linear_f(1.0), families::linear_g(2.0), 1.0);
    auto rep = validate_hypotheses(nl);
    EXPECT_FALSE(rep.all_pass());
    const auto& e11 = rep.get("e11");
    EXPECT_FALSE(e11.pass);
}

TEST(Validate, DegenerateRemovalFailsH2)
{
    auto nl = make_nonlinearity(families::power_f(1.0, 2.0), families::ricker(1.0, 1.0));
    auto rep = validate_hypotheses(nl);
    EXPECT_FALSE(rep.get("H2").pass);
}

TEST(Validate, MarineFamilies)
{
    auto ok = make_nonlinearity(families::linear_f(0.05), families::beverton_holt(2.0));
    EXPECT_TRUE(validate_hypotheses(ok).all_pass());
    auto bad = make_nonlinearity(families::linear_f(2.5), families::beverton_holt(2.0));
    EXPECT_FALSE(validate_hypotheses(bad).get("H2").pass);
}

TEST(Families, MajorantsAndSups)
{
    auto bh = families::beverton_holt(2.0, 1.0);
    EXPECT_DOUBLE_EQ(bh.g_prime0, 2.0);
    EXPECT_DOUBLE_EQ(bh.lipschitz_majorant, 2.0);
    EXPECT_DOUBLE_EQ(bh.g_sup, 2.0);
    auto rk = families::ricker(3.0, 1.0);
    EXPECT_NEAR(rk.g_sup, 3.0 / std::numbers::e, 1e-14);
    EXPECT_NEAR(rk.g(1.0), 3.0 / std::numbers::e, 1e-15);
    auto q = families::quadratic_f(1.0, 0.5);
    EXPECT_DOUBLE_EQ(q.f_prime0, 1.0);
    EXPECT_DOUBLE_EQ(q.f_inf_slope, 1.0);
    EXPECT_NEAR(q.f_inverse(q.f(2.3)), 2.3, 1e-13);
}

TEST(SelectBeta, Formula)
{
    auto nl = fixtures::benchmark_nl();
    EXPECT_DOUBLE_EQ(select_beta(nl), 3.0);
    auto marine = make_nonlinearity(families::linear_f(0.05), families::beverton_holt(2.0));
    EXPECT_NEAR(select_beta(marine), 1.1, 1e-15);
    for (double a : {0.1, 1.0, 4.0}) {
        auto lin = make_nonlinearity(families::linear_f(a), families::beverton_holt(2.0 * a + 1.0));
        EXPECT_GT(select_beta(lin) - a, 0.0);
    }
}

TEST(SelectBeta, QuadraticRemovalCoversBound)
{
    auto nl = make_nonlinearity(families::quadratic_f(1.0, 0.5), families::ricker(3.0, 1.0));
    double beta = select_beta(nl);
    double U = nl.bound();
    EXPECT_GE(beta, 1.0 + U + 1.0 - 1e-12);
    for (int i = 1; i <= 200; ++i) {
        double s0 = U * (i - 1) / 200.0;
        double s1 = U * i / 200.0;
        EXPECT_LE(beta * s0 - nl.f(s0), beta * s1 - nl.f(s1));
    }
}

TEST(Regularize, LinearNearZeroAndConvergent)
{
    auto nl = fixtures::benchmark_nl();
    const double beta = 3.0;
    auto r = regularize(nl, beta, 100);
    EXPECT_DOUBLE_EQ(r.threshold, 0.01);
    for (double s : {0.0, 0.001, 0.005, 0.01})
        EXPECT_DOUBLE_EQ(r.g_n(s), 2.0 * s);
    double dist = 0.0;
    double U = nl.bound();
    for (int i = 0; i <= 20000; ++i) {
        double s = U * i / 20000.0;
        dist = std::max(dist, std::abs(r.g_n(s) - nl.g(s)));
        EXPECT_LE(r.g_n(s), 2.0 * s + 1e-15);
    }
    EXPECT_LT(dist, 2.0 / 100.0);
    // Continuity at the threshold.
    double t = r.threshold;
    EXPECT_NEAR(r.g_n(t), r.g_n(std::nextafter(t, 1.0)), 1e-12);
    EXPECT_NEAR(r.f_beta_n(t), r.f_beta_n(std::nextafter(t, 1.0)), 1e-12);

    auto coarse = regularize(nl, beta, 10);
    double d10 = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        double s = U * i / 20000.0;
        d10 = std::max(d10, std::abs(coarse.g_n(s) - nl.g(s)));
    }
    EXPECT_LT(dist, d10);
    EXPECT_THROW(regularize(nl, beta, 0), InvalidParameter);
}

TEST(FixedPoints, BenchmarkUnitAttracting)
{
    auto rep = fixed_points_of_fg(fixtures::benchmark_nl());
    ASSERT_EQ(rep.points.size(), 1u);
    EXPECT_NEAR(rep.points[0].kappa, 1.0, 1e-10);
    EXPECT_TRUE(rep.points[0].attracting);
    EXPECT_DOUBLE_EQ(rep.G_prime0, 2.0);
}

TEST(FixedPoints, RickerLogTwo)
{
    auto nl = make_nonlinearity(families::linear_f(1.0), families::ricker(2.0 * std::numbers::e, 1.0));
    auto rep = fixed_points_of_fg(nl);
    ASSERT_EQ(rep.points.size(), 1u);
    EXPECT_NEAR(rep.points[0].kappa, 1.0 + std::numbers::ln2, 1e-10);
    // G'(kappa) = 1 - kappa = -ln 2.
    EXPECT_TRUE(rep.points[0].attracting);
}

TEST(FixedPoints, NoneWithoutGrowth)
{
    auto nl = make_nonlinearity(families::linear_f(2.0), families::beverton_holt(1.0));
    EXPECT_THROW(fixed_points_of_fg(nl), NoPositiveFixedPoint);
}

TEST(GreenEval, Examples)
{
    for (double c : {-1.0, 0.0, 2.0})
        EXPECT_NEAR(k1_eval(0.0, c, 3.0), 1.0 / std::sqrt(c * c + 12.0), 1e-15);
    for (double s : {-1.5, 0.3, 2.0})
        EXPECT_NEAR(k1_eval(s, 0.0, 1.0), std::exp(-std::abs(s)) / 2.0, 1e-15);
}
