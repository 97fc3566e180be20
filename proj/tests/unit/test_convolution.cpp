#include "oracles.hpp"
#include "setups.hpp"

#include "semiwave/convolution.hpp"
#include "semiwave/green.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/projection.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace semiwave;
using kernels::Law1D;
using numerics::Extension;
using numerics::ExtensionPolicy;
namespace oracle = semiwave::fixtures::oracle;

namespace {

double weight_at(const numerics::SampledKernel& k, long m)
{
    if (m < k.m_lo || m > k.m_hi())
        return 0.0;
    return k.w[static_cast<std::size_t>(m - k.m_lo)];
}

double hat_integral(const std::function<double(double)>& f, double center, double h)
{
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    return gk::integrate([&](double r) { return f(r) * (1.0 - std::abs(center - r) / h); }, center - h, center,
                         12, 1e-14) +
           gk::integrate([&](double r) { return f(r) * (1.0 - std::abs(center - r) / h); }, center, center + h,
                         12, 1e-14);
}

} // namespace

TEST(SampleProjection, DiscreteDelayIsSingleTap)
{
    const double h = 0.25;
    auto k = kernels::make_separable_kernel(Law1D::dirac(0.25), Law1D::dirac(0.0));
    auto pk = kernels::projection(k, 2.0);
    auto s = numerics::sample_projection(pk, h, 100);
    EXPECT_DOUBLE_EQ(weight_at(s, 2), 1.0);
    EXPECT_NEAR(s.total(), 1.0, 1e-15);

    std::vector<double> v(16, 0.0), out(16);
    v[5] = 1.0;
    numerics::convolve(s, v, {Extension::Zero, Extension::Zero}, out);
    for (std::size_t i = 0; i < 16; ++i)
        EXPECT_DOUBLE_EQ(out[i], i == 7 ? 1.0 : 0.0) << i;
}

TEST(SampleProjection, OffGridAtomSplitsLinearly)
{
    const double h = 0.2;
    auto k = kernels::make_separable_kernel(Law1D::dirac(0.13), Law1D::dirac(0.0));
    auto s = numerics::sample_projection(kernels::projection(k, 1.0), h, 100);
    EXPECT_NEAR(weight_at(s, 0), 1.0 - 0.13 / h, 1e-14);
    EXPECT_NEAR(weight_at(s, 1), 0.13 / h, 1e-14);
}

TEST(SampleProjection, HatWeightsMatchQuadrature)
{
    const double h = 0.1;
    auto pk = kernels::projection(fixtures::benchmark_kernel(), 1.5);
    auto s = numerics::sample_projection(pk, h, 2000);
    EXPECT_LT(std::abs(s.defect), 1e-8);
    EXPECT_NEAR(s.total(), 1.0, 1e-14);
    auto dens = [](double r) { return oracle::benchmark_k2(r, 1.5); };
    for (long m : {-30L, -5L, 0L, 3L, 17L, 60L})
        EXPECT_NEAR(weight_at(s, m), hat_integral(dens, m * h, h), 1e-10) << m;
}

TEST(Convolve, MatchesDirectSum)
{
    const double h = 0.3;
    auto pk = kernels::projection(fixtures::benchmark_kernel(), 0.8);
    auto s = numerics::sample_projection(pk, h, 40);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(16);
    for (double& x : v)
        x = u(rng);
    std::vector<double> out(16);
    numerics::convolve(s, v, {Extension::Zero, Extension::Zero}, out);
    auto ref = oracle::direct_convolution(v, [&](long m) { return weight_at(s, m); });
    for (std::size_t i = 0; i < v.size(); ++i)
        EXPECT_NEAR(out[i], ref[i], 1e-15) << i;
}

TEST(Convolve, HeldConstantKeepsMass)
{
    const double h = 0.05;
    auto s = numerics::sample_projection(kernels::projection(fixtures::benchmark_kernel(), 2.0), h, 50);
    std::vector<double> v(300, 0.7), out(300);
    numerics::convolve(s, v, {Extension::Hold, Extension::Hold}, out);
    for (double x : out)
        EXPECT_NEAR(x, 0.7, 1e-14);
}

TEST(Convolve, ZeroLeftSeesOnlyRightMass)
{
    const double h = 0.5;
    auto k = kernels::make_separable_kernel(Law1D::dirac(0.0), Law1D::gaussian(0.0, 4.0));
    auto s = numerics::sample_projection(kernels::projection(k, 0.0), h, 3);
    std::vector<double> v(40, 1.0), out(40);
    numerics::convolve(s, v, {Extension::Zero, Extension::Hold}, out);
    // At the left node, mass reaching beyond the grid to the left is lost.
    EXPECT_NEAR(out[0], 1.0 - s.mass_above - [&] {
        double x = 0.0;
        for (long m = 1; m <= s.m_hi(); ++m)
            x += weight_at(s, m);
        return x;
    }(), 1e-14);
    // Lumped far-left mass always reads the left extension.
    EXPECT_NEAR(out[39], 1.0 - s.mass_above, 1e-14);
}

TEST(Green, HatWeightsMatchQuadrature)
{
    const double h = 0.1;
    auto k1 = kernels::ExponentialGreen::for_profile(1.2, 3.0);
    auto s = numerics::sample_green(k1, h, 400);
    EXPECT_NEAR(s.total(), k1.mass(), 1e-13);
    for (long m : {-20L, -1L, 0L, 1L, 7L, 50L})
        EXPECT_NEAR(weight_at(s, m), hat_integral([&](double x) { return k1(x); }, m * h, h), 1e-13) << m;
}

TEST(Green, RecursionMatchesSampledKernel)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (auto [c, beta, h] : {std::tuple{0.0, 1.0, 0.1}, std::tuple{1.5, 3.0, 0.05}, std::tuple{-2.0, 0.5, 0.2}}) {
        auto k1 = kernels::ExponentialGreen::for_profile(c, beta);
        const std::size_t n = 500;
        std::vector<double> v(n);
        for (double& x : v)
            x = u(rng);
        auto s = numerics::sample_green(k1, h, static_cast<long>(n) + 1);
        for (auto pol : {ExtensionPolicy{Extension::Zero, Extension::Hold}, ExtensionPolicy{Extension::Hold, Extension::Hold},
                         ExtensionPolicy{Extension::Zero, Extension::Zero}}) {
            std::vector<double> a(n), b(n);
            numerics::convolve(s, v, pol, a);
            numerics::convolve_green(k1, h, v, pol, b);
            for (std::size_t i = 0; i < n; ++i)
                ASSERT_NEAR(a[i], b[i], 1e-12) << "c " << c << " i " << i;
        }
    }
}

TEST(Green, DiffusionKernelRoots)
{
    const double D = 2.0, c = 1.0, gamma = 0.5;
    auto k = kernels::ExponentialGreen::for_diffusion(D, c, gamma);
    for (double z : {k.nu(), k.mu()})
        EXPECT_NEAR(D * z * z - c * z - gamma, 0.0, 1e-14);
    EXPECT_NEAR(k.mass(), 1.0 / gamma, 1e-14);
    EXPECT_NEAR(k(0.0), 1.0 / std::sqrt(c * c + 4 * D * gamma), 1e-15);
}
