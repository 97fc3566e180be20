#include "semiwave/errors.hpp"
#include "semiwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semiwave::profile {

std::vector<double> residual_local(const WaveProblem& p, const Profile& prof)
{
    const std::size_t n = prof.values.size();
    const auto& v = prof.values;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = p.nl.g(v[i]);
    std::vector<double> k = convolve_k2(p, g);
    std::vector<double> res(n, 0.0);
    const double h = prof.grid.h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
        res[i] = d2 - prof.c * d1 - p.nl.f(v[i]) + k[i];
    }
    return res;
}

namespace {

std::pair<std::size_t, std::size_t> interior(const WaveProblem& p, const Grid& g)
{
    double m = p.margin();
    auto lo = static_cast<std::size_t>(std::ceil(m / g.h));
    lo = std::max<std::size_t>(lo, 1);
    if (2 * lo + 1 >= g.n)
        return {1, g.n > 2 ? g.n - 2 : 1};
    return {lo, g.n - 1 - lo};
}

} // namespace

double residual_ode(const WaveProblem& p, const Profile& prof)
{
    auto res = residual_local(p, prof);
    auto [lo, hi] = interior(p, prof.grid);
    double m = 0.0;
    for (std::size_t i = lo; i <= hi; ++i)
        m = std::max(m, std::abs(res[i]));
    return m;
}

double tail_rate(const WaveProblem& p, const Profile& prof)
{
    auto [lo, hi] = interior(p, prof.grid);
    std::size_t end = lo + (hi - lo) / 10;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double cnt = 0.0;
    for (std::size_t i = lo; i <= end; ++i) {
        double y = prof.values[i];
        if (!(y > 0.0))
            continue;
        double x = prof.grid.t(i);
        double ly = std::log(y);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
        cnt += 1.0;
    }
    if (cnt < 3.0)
        return std::numeric_limits<double>::quiet_NaN();
    double den = cnt * sxx - sx * sx;
    return (cnt * sxy - sx * sy) / den;
}

bool persistence_check(const Profile& prof, double xi1, double left_margin)
{
    const std::size_t n = prof.values.size();
    if (n < 4)
        return false;
    double right_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = n - n / 4; i < n; ++i)
        right_min = std::min(right_min, prof.values[i]);
    if (!(right_min > xi1))
        return false;
    auto start = static_cast<std::size_t>(std::ceil(left_margin / prof.grid.h));
    for (std::size_t i = start; i < n; ++i)
        if (!(prof.values[i] > 0.0))
            return false;
    return true;
}

double interpolate(const Profile& prof, double t)
{
    const Grid& g = prof.grid;
    if (t < g.t_min) {
        // Zero ghost values to the left.
        double u = (g.t_min - t) / g.h;
        return u >= 1.0 ? 0.0 : (1.0 - u) * prof.values.front();
    }
    if (t >= g.t_max())
        return prof.values.back();
    double x = (t - g.t_min) / g.h;
    auto i = static_cast<std::size_t>(std::floor(x));
    double f = x - static_cast<double>(i);
    return (1.0 - f) * prof.values[i] + f * prof.values[i + 1];
}

Profile normalize_translation(const Profile& prof, double level)
{
    const auto& v = prof.values;
    std::size_t i = 0;
    while (i < v.size() && v[i] < level)
        ++i;
    if (i == 0 || i == v.size())
        throw InvalidParameter("normalize_translation: profile does not cross the level");
    double t0 = prof.grid.t(i - 1);
    double shift = t0 + prof.grid.h * (level - v[i - 1]) / (v[i] - v[i - 1]);
    Profile out = prof;
    for (std::size_t j = 0; j < v.size(); ++j)
        out.values[j] = interpolate(prof, prof.grid.t(j) + shift);
    return out;
}

std::vector<double> central_derivative(const Profile& prof)
{
    const auto& v = prof.values;
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2)
        return d;
    const double h = prof.grid.h;
    d[0] = (v[1] - v[0]) / h;
    d[n - 1] = (v[n - 1] - v[n - 2]) / h;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    return d;
}

CriticalResult critical_speed_profile(const WaveProblem& at_critical, const CriticalOptions& opt)
{
    if (opt.n_max < 2)
        throw InvalidParameter("critical_speed_profile: n_max must be >= 2");
    const Nonlinearity& nl = at_critical.nl;
    const double c_star = at_critical.c;

    CriticalResult res;
    res.window_lo = opt.window_lo;
    res.window_hi = opt.window_hi;
    auto fps = fixed_points_of_fg(nl);
    res.kappa = fps.points.front().kappa;
    for (const auto& fp : fps.points)
        if (fp.attracting) {
            res.kappa = fp.kappa;
            break;
        }
    double sigma = std::sqrt(c_star * c_star + 4.0 * at_critical.beta);
    res.derivative_bound = (nl.g_sup + nl.g_sup / nl.f_inf_slope) / sigma;

    ProblemOptions popt = opt.problem;
    popt.beta = at_critical.beta;
    std::optional<Profile> previous;
    for (int n = 2; n <= opt.n_max; n *= 2) {
        double c_n = c_star > 0.0 ? (n + 1) * c_star / n : c_star + 1.0 / n;
        WaveProblem p = make_problem(nl, at_critical.kernel, c_n, popt);
        SolveResult sr = solve_profile(p, opt.solve);
        CriticalStep step;
        step.n = n;
        step.c_n = c_n;
        step.iterations = sr.profile.iterations;
        step.residual_sup = sr.profile.residual_sup;
        step.converged = sr.profile.converged;
        Profile normalized = normalize_translation(sr.profile, 0.5 * res.kappa);
        for (double d : central_derivative(sr.profile))
            step.max_derivative = std::max(step.max_derivative, std::abs(d));
        step.derivative_bound_ok = step.max_derivative <= res.derivative_bound;
        step.gap_to_previous = std::numeric_limits<double>::quiet_NaN();
        if (previous) {
            double h = std::min(previous->grid.h, normalized.grid.h);
            double gap = 0.0;
            for (double t = opt.window_lo; t <= opt.window_hi + 1e-12; t += h)
                gap = std::max(gap, std::abs(interpolate(normalized, t) - interpolate(*previous, t)));
            step.gap_to_previous = gap;
        }
        res.steps.push_back(step);
        previous = normalized;
        res.profile = normalized;
        res.profile.converged = sr.profile.converged;
    }
    if (!res.profile.converged) {
        std::ostringstream os;
        os << "critical_speed_profile: profile at n = " << res.steps.back().n << " did not converge";
        throw NotConverged(os.str());
    }
    return res;
}

} // namespace semiwave::profile
