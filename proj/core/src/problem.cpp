#include "semiwave/problem.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semiwave::profile {

Grid Grid::through_zero(double t_lo, double t_hi, double h)
{
    if (!(h > 0.0) || !(t_hi > t_lo) || t_lo > 0.0 || t_hi < 0.0)
        throw InvalidParameter("grid: need t_lo <= 0 <= t_hi, t_lo < t_hi and h > 0");
    auto left = static_cast<std::size_t>(std::ceil(-t_lo / h - 1e-9));
    auto right = static_cast<std::size_t>(std::ceil(t_hi / h - 1e-9));
    Grid g;
    g.h = h;
    g.t_min = -static_cast<double>(left) * h;
    g.n = left + right + 1;
    return g;
}

dispersion::DispersionFunction chi_zero(const Nonlinearity& nl, const kernels::Kernel& k)
{
    return {nl.f_prime0, nl.g_prime0, k};
}

dispersion::DispersionFunction chi_L(const Nonlinearity& nl, const kernels::Kernel& k)
{
    return {nl.f_inf_slope, nl.L, k};
}

namespace {

// Midpoint of the region in (lambda, upper) where chi_L < 0.
std::optional<double> select_m(const dispersion::DispersionFunction& d, double c, double lambda, double upper)
{
    constexpr int n = 64;
    double first = -1.0;
    double last = -1.0;
    for (int i = 1; i < n; ++i) {
        double z = lambda + (upper - lambda) * static_cast<double>(i) / n;
        if (dispersion::eval_R(d, z, c) < 0.0) {
            if (first < 0.0)
                first = z;
            last = z;
        }
    }
    if (first < 0.0)
        return std::nullopt;
    return 0.5 * (first + last);
}

double projected_radius(const kernels::ProjectedKernel& p)
{
    double r = 0.0;
    for (const auto& a : p.atoms)
        r = std::max(r, std::abs(a.at));
    if (p.density)
        r = std::max({r, std::abs(p.support.lo), std::abs(p.support.hi)});
    return r;
}

} // namespace

WaveProblem make_problem(const Nonlinearity& nl, const kernels::Kernel& k, double c, const ProblemOptions& opt)
{
    if (opt.reg_n < 1)
        throw InvalidParameter("make_problem: reg_n must be >= 1");
    double U = nl.bound();
    if (!std::isfinite(U))
        throw InvalidParameter("make_problem: sup g / inf f' must be finite");
    double beta = opt.beta.value_or(select_beta(nl));
    if (!(beta > nl.f_prime0))
        throw InvalidParameter("make_problem: beta must exceed f'(0)");

    WaveProblem p{nl, k, c, beta, {}, opt.reg_n, 0.0, 0.0, 0.0, std::nullopt, U, true, {},
                  kernels::ExponentialGreen::for_profile(c, beta), regularize(nl, beta, opt.reg_n), nullptr,
                  0.0, 0.0};

    auto dL = chi_L(nl, k);
    auto roots = dispersion::positive_roots(dL, c, opt.roots);
    if (roots.roots.empty() || roots.is_double) {
        p.admissible = false;
        p.lambda = roots.roots.empty() ? roots.z_min : roots.roots.front();
        p.m = std::numeric_limits<double>::quiet_NaN();
        std::ostringstream os;
        os << "make_problem: chi_L has " << (roots.roots.empty() ? "no positive root" : "only a double root")
           << " at c = " << c << "; sub-solution unavailable, iterating from the super-solution only";
        p.warnings.push_back(os.str());
    } else {
        p.lambda = roots.roots.front();
        if (roots.roots.size() > 1)
            p.lambda2 = roots.roots[1];
        double upper = dispersion::mu_q(c, dL.q);
        if (p.lambda2)
            upper = std::min(upper, *p.lambda2);
        upper = std::min(upper, dispersion::scan_limit(dL, c));
        auto m = select_m(dL, c, p.lambda, upper);
        if (!m) {
            p.admissible = false;
            p.m = std::numeric_limits<double>::quiet_NaN();
            p.warnings.push_back("make_problem: no m with chi_L(m, c) < 0 found between the roots");
        } else {
            p.m = *m;
        }
    }

    p.delta = opt.delta.value_or(std::min(1.0 / opt.reg_n, 0.1 * U));
    if (!(p.delta > 0.0))
        throw InvalidParameter("make_problem: delta must be positive");
    if (1.0 / opt.reg_n > p.delta * (1.0 + 1e-12))
        p.warnings.push_back("make_problem: 1/reg_n exceeds delta; the linear regime does not cover [0, delta]");

    double rate = std::max({-p.k1.nu(), p.k1.mu(), p.lambda});
    double h = opt.grid.h.value_or(1.0 / (opt.points_per_efold * rate));
    double span = opt.tail_efolds / p.lambda;
    double t_lo = opt.grid.t_min.value_or(-span);
    double t_hi = opt.grid.t_max.value_or(span);
    double points = (t_hi - t_lo) / h;
    if (!(points < static_cast<double>(opt.max_grid_points))) {
        std::ostringstream os;
        os << "make_problem: grid would need " << points << " points (limit " << opt.max_grid_points
           << "); override grid.h / grid.t_min / grid.t_max";
        throw InvalidParameter(os.str());
    }
    p.grid = Grid::through_zero(t_lo, t_hi, h);
    if (std::exp(std::max(-p.k1.nu(), p.k1.mu()) * h) - 1.0 >= 0.5)
        p.warnings.push_back("make_problem: grid step does not resolve the Green kernel rates");

    auto proj = kernels::projection(k, c);
    auto sampled = numerics::sample_projection(proj, h, static_cast<long>(p.grid.n) + 1, 1.0);
    if (std::abs(sampled.defect) > 1e-6) {
        std::ostringstream os;
        os << "make_problem: k2 quadrature mass defect " << sampled.defect << " renormalised";
        p.warnings.push_back(os.str());
    }
    p.k2 = std::make_shared<const numerics::SampledKernel>(std::move(sampled));
    p.k2_radius = projected_radius(proj);
    p.k1_radius = std::log(1e8) / std::min(-p.k1.nu(), p.k1.mu());
    return p;
}

} // namespace semiwave::profile
