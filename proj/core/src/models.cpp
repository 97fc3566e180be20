#include "semiwave/models.hpp"

#include "semiwave/convolution.hpp"
#include "semiwave/errors.hpp"
#include "semiwave/green.hpp"
#include "semiwave/operators.hpp"
#include "semiwave/problem.hpp"
#include "semiwave/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace semiwave::models {

namespace {

void check_epidemic(const EpidemicModel& m)
{
    if (!(m.alpha > 0.0) || !std::isfinite(m.alpha))
        throw InvalidParameter("epidemic model: alpha must be positive");
    if (!m.delay.nonnegative_support())
        throw InvalidParameter("epidemic model: delay law must live on [0, inf)");
}

std::vector<double> apply_g(const profile::Nonlinearity& nl, const std::vector<double>& v)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = nl.g(v[i]);
    return out;
}

} // namespace

EpidemicReduction epidemic_reduction(const EpidemicModel& m)
{
    check_epidemic(m);
    kernels::Law1D temporal = m.delay.with_exponential_delay(m.alpha);
    kernels::Kernel k = kernels::make_separable_kernel(temporal, m.dispersal);
    profile::Nonlinearity nl = m.nl;
    double a = m.alpha;
    auto g = m.nl.g;
    nl.g = [g, a](double s) { return g(s) / a; };
    nl.g_prime0 = m.nl.g_prime0 / a;
    nl.L = m.nl.L / a;
    nl.g_sup = m.nl.g_sup / a;
    std::ostringstream os;
    os << m.nl.description << ", scaled by 1/alpha = 1/" << a;
    nl.description = os.str();
    return {k, nl};
}

DispersionPair epidemic_dispersion(const EpidemicModel& m)
{
    auto r = epidemic_reduction(m);
    return {profile::chi_zero(r.nl, r.kernel), profile::chi_L(r.nl, r.kernel)};
}

double epidemic_k2_mass(const EpidemicModel& m, double quad_tol)
{
    check_epidemic(m);
    const double a = m.alpha;
    auto K2 = [&](double w) {
        double v = 0.0;
        for (const auto& at : m.delay.atom_list())
            if (at.at <= w)
                v += at.weight * std::exp(-a * (w - at.at));
        if (m.delay.has_density() && w > 0.0) {
            auto f = [&](double r) { return std::exp(-a * (w - r)) * m.delay.pdf(r); };
            v += numerics::integrate_pieces(f, 0.0, w, m.delay.breakpoints(), 0.01 * quad_tol, 1e-12).value;
        }
        return v;
    };
    kernels::Interval s = m.delay.support(1e-14);
    std::vector<double> cuts;
    for (const auto& at : m.delay.atom_list())
        cuts.push_back(at.at);
    for (double b : m.delay.breakpoints())
        cuts.push_back(b);
    double hi = s.hi + 1.0 / a;
    double core = numerics::integrate_pieces(K2, 0.0, hi, cuts, 0.1 * quad_tol, 1e-12).value;
    double tail = numerics::integrate_outward(K2, hi, hi + 1.0 / a, hi, std::numeric_limits<double>::infinity(),
                                              0.01 * quad_tol, 1e-12)
                      .value;
    return core + tail;
}

std::vector<double> epidemic_reconstruct(const EpidemicModel& m, const profile::Profile& prof, double c)
{
    check_epidemic(m);
    std::vector<double> g = apply_g(m.nl, prof.values);
    if (c == 0.0) {
        for (double& x : g)
            x /= m.alpha;
        return g;
    }
    kernels::Law1D temporal = m.delay.with_exponential_delay(m.alpha);
    kernels::Kernel k = kernels::make_separable_kernel(temporal, kernels::Law1D::dirac(0.0));
    auto proj = kernels::projection(k, c);
    auto w = numerics::sample_projection(proj, prof.grid.h, static_cast<long>(prof.grid.n) + 1, 1.0);
    std::vector<double> psi(g.size());
    numerics::convolve(w, g, profile::profile_extension, psi);
    for (double& x : psi)
        x /= m.alpha;
    return psi;
}

std::vector<double> population_H(const PopulationModel& m, const profile::Profile& prof, double c)
{
    std::vector<double> g = apply_g(m.nl, prof.values);
    auto proj = kernels::projection(m.kernel, c);
    auto w = numerics::sample_projection(proj, prof.grid.h, static_cast<long>(prof.grid.n) + 1, 1.0);
    std::vector<double> avg(g.size());
    // Hold both ends so that constants are annihilated exactly.
    numerics::convolve(w, g, {numerics::Extension::Hold, numerics::Extension::Hold}, avg);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] -= avg[i];
    return g;
}

std::vector<double> population_reconstruct(const PopulationModel& m, const profile::Profile& prof, double c)
{
    if (!(m.D > 0.0) || !(m.gamma > 0.0))
        throw InvalidParameter("population model: D and gamma must be positive");
    std::vector<double> H = population_H(m, prof, c);
    auto k1 = kernels::ExponentialGreen::for_diffusion(m.D, c, m.gamma);
    std::vector<double> psi(H.size());
    numerics::convolve_green(k1, prof.grid.h, H, profile::profile_extension, psi);
    return psi;
}

DispersionPair population_dispersion(const PopulationModel& m)
{
    return {profile::chi_zero(m.nl, m.kernel), profile::chi_L(m.nl, m.kernel)};
}

MarinePreset marine_preset(double v_j, double d_j, double mu_j, double mu_a, double p,
                           std::optional<profile::GFamily> g, std::optional<double> L)
{
    if (!(mu_a > 0.0) || !(p > 0.0))
        throw InvalidParameter("marine preset: mu_a and p must be positive");
    if (!(p > mu_a))
        throw InvalidParameter("marine preset: need p > mu_a");
    profile::GFamily birth = g.value_or(profile::families::beverton_holt(p, 1.0));
    if (std::abs(birth.g_prime0 - p) > 1e-12 * p)
        throw InvalidParameter("marine preset: g'(0) must equal p");
    kernels::Kernel k = kernels::make_marine_kernel(v_j, d_j, mu_j);
    profile::Nonlinearity nl = profile::make_nonlinearity(profile::families::linear_f(mu_a), birth, L);
    return {k, nl, profile::chi_zero(nl, k), profile::chi_L(nl, k)};
}

} // namespace semiwave::models
