#include "oracles.hpp"
#include "setups.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/green.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/law.hpp"
#include "semiwave/projection.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace semiwave;
using kernels::Law1D;
namespace oracle = semiwave::fixtures::oracle;

namespace {

const fixtures::MarineParams mp{};

kernels::Kernel marine() { return kernels::make_marine_kernel(mp.v, mp.d, mp.mu); }

double integrate_line(const std::function<double(double)>& f, double a, double b, std::vector<double> breaks = {},
                      double tol = 1e-12, int pieces = 40)
{
    std::vector<double> cuts{a, b};
    for (int i = 1; i < pieces; ++i)
        cuts.push_back(a + (b - a) * i / pieces);
    for (double x : breaks)
        if (x > a && x < b)
            cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 10, tol);
    return sum;
}

} // namespace

TEST(Law, ClosedFormLaplaceMatchesQuadrature)
{
    std::vector<Law1D> laws{Law1D::exponential(1.5), Law1D::gamma(2.5, 2.0), Law1D::gaussian(0.3, 0.7),
                            Law1D::laplace_law(-0.2, 0.8), Law1D::uniform(0.5, 2.0)};
    for (const auto& law : laws) {
        auto sp = law.support(1e-16);
        for (double theta : {-0.4, 0.0, 0.3, 0.6}) {
            auto lt = law.laplace(theta);
            ASSERT_TRUE(lt.has_value()) << law.name();
            double q = integrate_line([&](double x) { return std::exp(-theta * x) * law.pdf(x); }, sp.lo - 40.0,
                                      sp.hi + 40.0, {sp.lo, sp.hi, -0.2, 0.0, 0.3, 0.5, 2.0}, 1e-13, 80);
            EXPECT_NEAR(*lt, q, 1e-9 * q) << law.name() << " theta " << theta;
        }
    }
}

TEST(Law, ExponentialDelayConvolutionMatchesQuadrature)
{
    const double rate = 2.0;
    std::vector<Law1D> laws{Law1D::gamma(2.0, 2.0), Law1D::gamma(1.5, 3.0), Law1D::uniform(0.0, 1.5),
                            Law1D::exponential(0.5)};
    for (const auto& law : laws) {
        auto sum = law.with_exponential_delay(rate);
        for (double x : {0.1, 0.8, 2.0, 5.0}) {
            boost::math::quadrature::tanh_sinh<double> ts;
            double q = ts.integrate([&](double y) { return law.pdf(y) * rate * std::exp(-rate * (x - y)); }, 0.0,
                                    std::min(x, 1.5));
            if (x > 1.5)
                q += integrate_line([&](double y) { return law.pdf(y) * rate * std::exp(-rate * (x - y)); }, 1.5, x);
            EXPECT_NEAR(sum.pdf(x), q, 1e-9) << law.name() << " x " << x;
        }
        EXPECT_NEAR(sum.laplace(0.3).value(), law.laplace(0.3).value() * rate / (rate + 0.3), 1e-12);
    }
}

TEST(Law, DiracStaysSymbolic)
{
    auto d = Law1D::dirac(1.25);
    ASSERT_EQ(d.atom_list().size(), 1u);
    EXPECT_FALSE(d.has_density());
    EXPECT_DOUBLE_EQ(d.laplace(0.4).value(), std::exp(-0.4 * 1.25));
    EXPECT_DOUBLE_EQ(d.mass(), 1.0);
}

TEST(KernelMass, MarineIsOne)
{
    EXPECT_NEAR(kernels::kernel_mass(marine()), 1.0, 1e-6);
}

TEST(KernelMass, DiscreteDelayIsExactlyOne)
{
    auto k = kernels::make_separable_kernel(Law1D::dirac(2.0), Law1D::gaussian(0.0, 1.0));
    // The spatial factor is truncated at the tail tolerance.
    double m = kernels::kernel_mass(k);
    EXPECT_GE(m, 1.0 - kernels::default_tail_tol);
    EXPECT_LE(m, 1.0 + kernels::default_quad_tol);
}

TEST(KernelMass, MarineTruncatedBoxMatchesExponentialTail)
{
    auto k = marine();
    auto box = k.support_box();
    box.s_max = 3.0 / mp.mu;
    // 1-D closed form of the lifetime density mass on [0, s_max].
    double expected = 1.0 - std::exp(-3.0);
    EXPECT_NEAR(kernels::kernel_mass(k, 1e-9, box), expected, 1e-6);
}

TEST(Transform, UnitMassAtZero)
{
    std::vector<kernels::Kernel> ks{marine(), fixtures::benchmark_kernel(), fixtures::delta_kernel()};
    for (const auto& k : ks)
        for (double c : {-1.0, 0.0, 1.0, 3.0})
            EXPECT_NEAR(kernels::transform(k, 0.0, c), 1.0, 1e-8) << k.name() << " c " << c;
}

TEST(Transform, MarineClosedFormEqualsOracle)
{
    auto k = marine();
    for (double c : {1.0, 3.0})
        for (double frac : {0.1, 0.5, 0.9}) {
            double z = frac * k.domain(c).z_hi;
            EXPECT_DOUBLE_EQ(kernels::transform(k, z, c), oracle::marine_transform(z, c, mp.v, mp.d, mp.mu));
        }
}

TEST(Transform, MarinePoleAtQuadraticRoot)
{
    auto k = marine();
    // 100 z^2 - 2.98 z - 0.001 = 0.
    double pole = (2.98 + std::sqrt(2.98 * 2.98 + 0.4)) / 200.0;
    EXPECT_NEAR(k.domain(3.0).z_hi, pole, 1e-12);
    EXPECT_TRUE(std::isfinite(kernels::transform(k, 0.99 * pole, 3.0)));
    EXPECT_THROW(kernels::transform(k, 1.01 * pole, 3.0), DomainExceeded);
}

TEST(Transform, MarineDensityPeak)
{
    auto k = marine();
    double expected = mp.mu * std::exp(-mp.mu) / (2.0 * std::sqrt(std::numbers::pi * mp.d));
    EXPECT_NEAR(k.density(1.0, -mp.v), expected, 1e-15);
}

TEST(Transform, SeparableFamilies)
{
    auto delta = fixtures::delta_kernel();
    EXPECT_DOUBLE_EQ(kernels::transform(delta, 0.7, 2.0), 1.0);

    const double alpha = 1.5;
    auto expo = kernels::make_separable_kernel(Law1D::exponential(alpha), Law1D::dirac(0.0));
    for (double zc : {0.0, 0.5, 3.0})
        EXPECT_NEAR(kernels::transform(expo, zc / 2.0, 2.0), alpha / (alpha + zc), 1e-12);

    const double tau = 0.8, var = 0.6;
    auto dg = kernels::make_separable_kernel(Law1D::dirac(tau), Law1D::gaussian(0.0, var));
    for (double z : {0.2, 1.0})
        EXPECT_NEAR(kernels::transform(dg, z, 1.3), std::exp(-z * 1.3 * tau + z * z * var / 2.0), 1e-12);
}

TEST(Transform, QuadratureAgreesWithClosedFormForSeparable)
{
    auto k = fixtures::benchmark_kernel();
    for (double c : {0.5, 2.0})
        for (double z : {0.1, 0.4}) {
            double closed = kernels::transform(k, z, c);
            EXPECT_NEAR(kernels::transform_quadrature(k, z, c), closed, 1e-6 * closed);
            EXPECT_NEAR(closed, oracle::benchmark_transform(z, c), 1e-13);
        }
}

TEST(Transform, MarineConvexInZ)
{
    auto k = marine();
    const double c = 3.0;
    double top = 0.99 * k.domain(c).z_hi;
    const int n = 200;
    std::vector<double> v;
    for (int i = 0; i <= n; ++i)
        v.push_back(kernels::transform(k, top * i / n, c));
    for (int i = 1; i < n; ++i)
        EXPECT_GE(v[i - 1] - 2 * v[i] + v[i + 1], -1e-8);
}

TEST(ProjectK2, DiscreteDelayIsShiftedSpatialDensity)
{
    const double tau = 0.5, c = 2.0;
    auto J = Law1D::gaussian(0.0, 1.0);
    auto k = kernels::make_separable_kernel(Law1D::dirac(tau), J);
    for (double r : {-1.0, 0.0, 1.0, 2.5})
        EXPECT_NEAR(kernels::project_k2(k, c, r), J.pdf(r - c * tau), 1e-15);
}

TEST(ProjectK2, MarineMatchesRiemannSum)
{
    auto k = marine();
    const double c = 3.0;
    double s_max = k.support_box().s_max;
    for (double r : {5.0, 50.0, 200.0, -100.0}) {
        double ref = oracle::marine_k2_riemann(r, c, mp.v, mp.d, mp.mu, s_max, 2'000'000);
        EXPECT_NEAR(kernels::project_k2(k, c, r), ref, 1e-6) << "r " << r;
    }
}

TEST(ProjectK2, BenchmarkMatchesExGaussian)
{
    auto k = fixtures::benchmark_kernel();
    for (double c : {0.5, 1.8})
        for (double r : {-2.0, 0.0, 0.3, 4.0})
            EXPECT_NEAR(kernels::project_k2(k, c, r), oracle::benchmark_k2(r, c), 1e-10);
}

TEST(ProjectK2, IntegratesToOne)
{
    std::vector<kernels::Kernel> ks{fixtures::benchmark_kernel(),
                                    kernels::make_separable_kernel(Law1D::gamma(2.0, 1.0), Law1D::laplace_law(0.0, 1.0)),
                                    kernels::make_separable_kernel(Law1D::uniform(0.0, 2.0), Law1D::gaussian(0.5, 0.3))};
    for (const auto& k : ks)
        for (double c : {-1.0, 0.0, 1.0, 3.0}) {
            auto pk = kernels::projection(k, c);
            ASSERT_TRUE(static_cast<bool>(pk.density));
            double m = integrate_line(pk.density, pk.support.lo, pk.support.hi, {}, 1e-9, 16);
            EXPECT_NEAR(m + pk.atom_mass, 1.0, 1e-6) << k.name() << " c " << c;
        }
}

TEST(ProjectK2, MarineIntegratesToOne)
{
    auto k = marine();
    for (double c : {0.0, 1.0, 3.0}) {
        auto pk = kernels::projection(k, c);
        double m = integrate_line(pk.density, pk.support.lo, pk.support.hi, {}, 1e-8, 16);
        EXPECT_NEAR(m, 1.0, 1e-6) << "c " << c;
    }
}

TEST(Kernel, RejectsBadParameters)
{
    EXPECT_THROW(kernels::make_marine_kernel(0.0, 100.0, 0.001), InvalidParameter);
    EXPECT_THROW(kernels::make_marine_kernel(0.02, -1.0, 0.001), InvalidParameter);
    EXPECT_THROW(kernels::make_separable_kernel(Law1D::gaussian(0.0, 1.0), Law1D::gaussian(0.0, 1.0)),
                 InvalidParameter);
    EXPECT_THROW(fixtures::delta_kernel().density(0.0, 0.0), InvalidParameter);
}

TEST(Green, ProfileKernelFacts)
{
    for (double c : {-1.0, 0.0, 2.0})
        for (double beta : {0.5, 3.0}) {
            auto k1 = kernels::ExponentialGreen::for_profile(c, beta);
            double sigma = std::sqrt(c * c + 4 * beta);
            EXPECT_NEAR(k1(0.0), 1.0 / sigma, 1e-15);
            EXPECT_NEAR(k1.mass(), 1.0 / beta, 1e-14);
            EXPECT_NEAR(k1.nu(), (c - sigma) / 2, 1e-15);
            EXPECT_NEAR(k1.mu(), (c + sigma) / 2, 1e-15);
        }
    auto k1 = kernels::ExponentialGreen::for_profile(0.0, 1.0);
    for (double s : {-2.0, -0.5, 0.5, 3.0})
        EXPECT_NEAR(k1(s), std::exp(-std::abs(s)) / 2.0, 1e-15);
}

TEST(Green, RandomLaplaceAgreesWithQuadrature)
{
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> uc(-2.0, 2.0), ub(0.2, 4.0), uu(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        double c = uc(rng), beta = ub(rng);
        auto k1 = kernels::ExponentialGreen::for_profile(c, beta);
        double z = k1.nu() + uu(rng) * (k1.mu() - k1.nu());
        auto f = [&](double s) { return k1(s) * std::exp(-z * s); };
        double q = integrate_line(f, -80.0 / (k1.mu() - z), 0.0) + integrate_line(f, 0.0, 80.0 / (z - k1.nu()));
        EXPECT_NEAR(k1.laplace(z), q, 1e-9 * q);
    }
}
