#include "semiwave/dispersion.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace semiwave::dispersion {

DispersionFunction::DispersionFunction(double q_, double p_, kernels::Kernel kernel_)
    : q(q_), p(p_), kernel(std::move(kernel_))
{
    if (!(q > 0.0) || !(p > q) || !std::isfinite(p))
        throw InvalidParameter("dispersion function: need p > q > 0");
}

double eval_R(const DispersionFunction& d, double z, double c)
{
    return z * z - c * z - d.q + d.p * kernels::transform(d.kernel, z, c);
}

double mu_q(double c, double q)
{
    double s = std::sqrt(c * c + 4.0 * q);
    return c >= 0.0 ? 0.5 * (c + s) : 2.0 * q / (s - c);
}

double scan_limit(const DispersionFunction& d, double c)
{
    double m = mu_q(c, d.q);
    double g = d.kernel.abscissa(c);
    if (std::isfinite(g))
        m = std::min(m, kernels::abscissa_margin * g);
    return m;
}

namespace {

struct Scan {
    std::vector<double> z;
    std::vector<double> r;
};

Scan sample(const DispersionFunction& d, double c, double z_hi, int n)
{
    Scan s;
    s.z.resize(static_cast<std::size_t>(n) + 1);
    s.r.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        double z = z_hi * static_cast<double>(k) / n;
        s.z[k] = z;
        s.r[k] = eval_R(d, z, c);
    }
    return s;
}

MinimumReport refine_min(const DispersionFunction& d, double c, const Scan& s, double z_hi)
{
    std::size_t k = static_cast<std::size_t>(std::min_element(s.r.begin(), s.r.end()) - s.r.begin());
    double a = s.z[k == 0 ? 0 : k - 1];
    double b = s.z[std::min(k + 1, s.z.size() - 1)];
    auto f = [&](double z) { return eval_R(d, z, c); };
    std::uintmax_t iters = 200;
    auto [zm, vm] = boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits / 2,
                                                          iters);
    MinimumReport m{zm, vm, z_hi};
    if (s.r[k] < vm) {
        m.z = s.z[k];
        m.value = s.r[k];
    }
    return m;
}

double bisect_root(const DispersionFunction& d, double c, double a, double b)
{
    auto f = [&](double z) { return eval_R(d, z, c); };
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 3);
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, tol, iters);
    double flo = std::abs(f(lo));
    double fhi = std::abs(f(hi));
    return flo <= fhi ? lo : hi;
}

} // namespace

MinimumReport minimize_R(const DispersionFunction& d, double c, const RootOptions& opt)
{
    double z_hi = scan_limit(d, c);
    Scan s = sample(d, c, z_hi, opt.scan_points);
    return refine_min(d, c, s, z_hi);
}

RootReport positive_roots(const DispersionFunction& d, double c, const RootOptions& opt)
{
    RootReport rep;
    rep.c = c;
    rep.bound_mu_q = mu_q(c, d.q);
    double z_hi = scan_limit(d, c);
    rep.z_hi = z_hi;
    Scan s = sample(d, c, z_hi, opt.scan_points);
    MinimumReport m = refine_min(d, c, s, z_hi);
    rep.z_min = m.z;
    rep.r_min = m.value;

    std::vector<std::pair<double, double>> brackets;
    for (std::size_t k = 0; k + 1 < s.z.size(); ++k) {
        if (s.r[k] == 0.0 && k > 0) {
            brackets.push_back({s.z[k], s.z[k]});
            continue;
        }
        if ((s.r[k] > 0.0 && s.r[k + 1] < 0.0) || (s.r[k] < 0.0 && s.r[k + 1] > 0.0))
            brackets.push_back({s.z[k], s.z[k + 1]});
    }
    if (brackets.size() > 2) {
        std::ostringstream os;
        os << "positive_roots: " << brackets.size() << " sign changes at c = " << c
           << "; scan tolerances are misconfigured";
        throw std::logic_error(os.str());
    }
    if (brackets.empty() && m.value < 0.0) {
        // Both crossings lie between two samples around the refined minimum.
        auto it = std::lower_bound(s.z.begin(), s.z.end(), m.z);
        std::size_t k = static_cast<std::size_t>(it - s.z.begin());
        double a = s.z[k == 0 ? 0 : k - 1];
        double b = s.z[std::min(k, s.z.size() - 1)];
        if (b <= m.z)
            b = s.z[std::min(k + 1, s.z.size() - 1)];
        brackets.push_back({a, m.z});
        brackets.push_back({m.z, b});
    }

    for (auto [a, b] : brackets)
        rep.roots.push_back(a == b ? a : bisect_root(d, c, a, b));
    std::sort(rep.roots.begin(), rep.roots.end());

    if (rep.roots.empty()) {
        if (m.value >= 0.0 && m.value < opt.double_tol && m.z > 0.0) {
            rep.roots.push_back(m.z);
            rep.is_double = true;
        }
    } else if (rep.roots.size() == 2 && rep.roots[1] - rep.roots[0] < opt.tie_gap) {
        rep.roots = {m.z};
        rep.is_double = true;
    }
    return rep;
}

SpeedResult minimal_speed(const DispersionFunction& d, std::optional<std::pair<double, double>> c_bracket,
                          const SpeedOptions& opt)
{
    SpeedResult res;
    auto has_root = [&](double c) {
        ++res.evaluations;
        return minimize_R(d, c, opt.roots).value <= 0.0;
    };

    double lo;
    double hi;
    if (c_bracket) {
        lo = c_bracket->first;
        hi = c_bracket->second;
        if (!(hi > lo))
            throw BadBracket("minimal_speed: bracket must satisfy lo < hi");
        bool at_lo = has_root(lo);
        bool at_hi = has_root(hi);
        if (at_lo || !at_hi) {
            std::ostringstream os;
            os << "minimal_speed: indicator does not change over [" << lo << ", " << hi << "] (root at lo: "
               << (at_lo ? "yes" : "no") << ", root at hi: " << (at_hi ? "yes" : "no")
               << "); widen the bracket so that lo has no positive root and hi has one";
            throw BadBracket(os.str());
        }
    } else {
        lo = 0.0;
        if (has_root(lo)) {
            // Fronts may travel backwards; search negative speeds.
            double step = 1.0;
            hi = lo;
            lo = -step;
            while (has_root(lo)) {
                hi = lo;
                step *= 2.0;
                lo = -step;
                if (step > opt.c_cap) {
                    res.cap_hit = true;
                    throw BadBracket("minimal_speed: every speed down to -c_cap has a positive root; "
                                     "supply an explicit bracket");
                }
            }
            res.warnings.push_back("minimal_speed: c = 0 already admits a root; searched negative speeds");
        } else {
            hi = 1.0;
            while (!has_root(hi)) {
                lo = hi;
                hi *= 2.0;
                if (hi > opt.c_cap) {
                    res.cap_hit = true;
                    std::ostringstream os;
                    os << "minimal_speed: no positive root up to the bracket cap c = " << opt.c_cap
                       << "; supply an explicit bracket";
                    throw BadBracket(os.str());
                }
            }
        }
    }

    while (hi - lo >= opt.speed_tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (has_root(mid) ? hi : lo) = mid;
    }
    res.c_min = hi;
    res.bracket = {lo, hi};
    res.lambda_tangent = minimize_R(d, hi, opt.roots).z;
    return res;
}

IdentityCheck chi_identity_check(const DispersionFunction& d, double beta, double c,
                                 const std::vector<double>& z_grid)
{
    if (!(beta > d.q))
        throw InvalidParameter("chi_identity_check: need beta > q");
    IdentityCheck out;
    auto forms = [&](double z) {
        double den = beta + c * z - z * z;
        if (!(den > 0.0))
            throw DomainExceeded("chi_identity_check: z beyond the positive root of z^2 - c z - beta");
        double m = kernels::transform(d.kernel, z, c);
        double integral = 1.0 - (beta - d.q) / den - d.p * m / den;
        double quotient = -eval_R(d, z, c) / den;
        return std::pair<double, double>{integral, quotient};
    };
    for (double z : z_grid) {
        auto [a, b] = forms(z);
        out.max_abs_error = std::max(out.max_abs_error, std::abs(a - b));
    }
    auto [a0, b0] = forms(0.0);
    out.chi0_integral = a0;
    out.chi0_quotient = b0;
    out.chi0_expected = (d.q - d.p) / beta;
    return out;
}

} // namespace semiwave::dispersion
