#include "semiwave/operators.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>

namespace semiwave::profile {

double k1_eval(double s, double c, double beta)
{
    return kernels::ExponentialGreen::for_profile(c, beta)(s);
}

Envelopes envelopes(const WaveProblem& p)
{
    Envelopes e;
    e.lower.assign(p.grid.n, 0.0);
    e.upper.resize(p.grid.n);
    for (std::size_t i = 0; i < p.grid.n; ++i) {
        double t = p.grid.t(i);
        e.upper[i] = p.delta * std::exp(p.lambda * t);
        if (p.admissible && t < 0.0)
            e.lower[i] = p.delta * std::exp(p.lambda * t) * -std::expm1((p.m - p.lambda) * t);
    }
    return e;
}

Envelopes sub_super(const WaveProblem& p)
{
    if (!p.admissible)
        throw NoAdmissibleM("sub_super: no m in (lambda, min(lambda2, mu_q)) with chi_L(m, c) < 0");
    return envelopes(p);
}

std::vector<double> convolve_k2(const WaveProblem& p, std::span<const double> v)
{
    std::vector<double> out(v.size());
    numerics::convolve(*p.k2, v, profile_extension, out);
    return out;
}

std::vector<double> convolve_k1(const WaveProblem& p, std::span<const double> v)
{
    std::vector<double> out(v.size());
    numerics::convolve_green(p.k1, p.grid.h, v, profile_extension, out);
    return out;
}

std::vector<double> apply_G(const WaveProblem& p, std::span<const double> phi, Branch b)
{
    const std::size_t n = phi.size();
    std::vector<double> gphi(n);
    std::vector<double> fb(n);
    if (b == Branch::Exact) {
        for (std::size_t i = 0; i < n; ++i) {
            gphi[i] = p.nl.g(phi[i]);
            fb[i] = p.beta * phi[i] - p.nl.f(phi[i]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            gphi[i] = p.reg.g_n(phi[i]);
            fb[i] = p.reg.f_beta_n(phi[i]);
        }
    }
    std::vector<double> out = convolve_k2(p, gphi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] += fb[i];
    return out;
}

std::vector<double> apply_A(const WaveProblem& p, std::span<const double> phi, Branch b)
{
    return convolve_k1(p, apply_G(p, phi, b));
}

std::vector<double> apply_L(const WaveProblem& p, std::span<const double> phi)
{
    std::vector<double> lin(phi.begin(), phi.end());
    for (double& x : lin)
        x *= p.nl.L;
    std::vector<double> g = convolve_k2(p, lin);
    double slope = p.beta - p.nl.f_inf_slope;
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] += slope * phi[i];
    return convolve_k1(p, g);
}

} // namespace semiwave::profile
