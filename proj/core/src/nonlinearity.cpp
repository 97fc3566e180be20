#include "semiwave/nonlinearity.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace semiwave::profile {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw InvalidParameter(what);
}

std::string fmt(const char* name, double a)
{
    std::ostringstream os;
    os << name << "(" << a << ")";
    return os.str();
}

std::string fmt(const char* name, double a, double b)
{
    std::ostringstream os;
    os << name << "(" << a << ", " << b << ")";
    return os.str();
}

// Inverse of a strictly increasing f with f(0) = 0 by bracketing.
double invert_increasing(const std::function<double(double)>& f, double y)
{
    if (y <= 0.0)
        return 0.0;
    double hi = 1.0;
    int guard = 0;
    while (f(hi) < y) {
        hi *= 2.0;
        if (++guard > 2000)
            throw InvalidParameter("f inverse: value not attained");
    }
    auto h = [&](double s) { return f(s) - y; };
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        h, 0.0, hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), iters);
    return 0.5 * (a + b);
}

std::vector<double> log_samples(double hi, std::size_t n)
{
    std::vector<double> s;
    s.reserve(n + 1);
    s.push_back(0.0);
    double lo = hi * 1e-8;
    for (std::size_t i = 0; i < n; ++i)
        s.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
    return s;
}

} // namespace

namespace families {

GFamily beverton_holt(double p, double b)
{
    require(p > 0.0 && b > 0.0, "beverton_holt: p and b must be positive");
    return {fmt("beverton_holt", p, b), [p, b](double s) { return p * s / (1.0 + b * s); }, p, p, p / b};
}

GFamily ricker(double p, double b)
{
    require(p > 0.0 && b > 0.0, "ricker: p and b must be positive");
    return {fmt("ricker", p, b), [p, b](double s) { return p * s * std::exp(-b * s); }, p, p,
            p / (b * std::numbers::e)};
}

GFamily mackey_glass(double p, double k)
{
    require(p > 0.0 && k >= 1.0, "mackey_glass: need p > 0 and k >= 1");
    double sup = p;
    if (k > 1.0) {
        double s = std::pow(k - 1.0, -1.0 / k);
        sup = p * s / (1.0 + std::pow(s, k));
    }
    return {fmt("mackey_glass", p, k), [p, k](double s) { return p * s / (1.0 + std::pow(s, k)); }, p, p,
            sup};
}

GFamily linear_g(double p)
{
    require(p > 0.0, "linear g: p must be positive");
    return {fmt("linear", p), [p](double s) { return p * s; }, p, p, inf};
}

FFamily linear_f(double a)
{
    require(a > 0.0, "linear f: slope must be positive");
    return {fmt("linear", a), [a](double s) { return a * s; }, [a](double) { return a; },
            [a](double y) { return y / a; }, a, a};
}

FFamily quadratic_f(double a, double b)
{
    require(a > 0.0 && b >= 0.0, "quadratic f: need a > 0 and b >= 0");
    std::function<double(double)> inv;
    if (b > 0.0)
        inv = [a, b](double y) { return 2.0 * y / (a + std::sqrt(a * a + 4.0 * b * y)); };
    else
        inv = [a](double y) { return y / a; };
    return {fmt("quadratic", a, b), [a, b](double s) { return a * s + b * s * s; },
            [a, b](double s) { return a + 2.0 * b * s; }, inv, a, a};
}

FFamily power_f(double a, double k)
{
    require(a > 0.0 && k >= 1.0, "power f: need a > 0 and k >= 1");
    double d0 = k == 1.0 ? a : 0.0;
    return {fmt("power", a, k), [a, k](double s) { return a * std::pow(s, k); },
            [a, k](double s) { return k == 1.0 ? a : a * k * std::pow(s, k - 1.0); },
            [a, k](double y) { return std::pow(y / a, 1.0 / k); }, d0, d0};
}

} // namespace families

double Nonlinearity::bound() const
{
    if (!(f_inf_slope > 0.0) || !std::isfinite(g_sup))
        return inf;
    return g_sup / f_inf_slope;
}

Nonlinearity make_nonlinearity(const FFamily& f, const GFamily& g, std::optional<double> L)
{
    Nonlinearity nl;
    nl.g = g.g;
    nl.g_prime0 = g.g_prime0;
    nl.L = L.value_or(g.lipschitz_majorant);
    nl.g_sup = g.g_sup;
    nl.f = f.f;
    nl.f_prime = f.f_prime;
    nl.f_prime0 = f.f_prime0;
    nl.f_inf_slope = f.f_inf_slope;
    if (f.f_inverse) {
        nl.f_inverse = f.f_inverse;
    } else {
        auto ff = f.f;
        nl.f_inverse = [ff](double y) { return invert_increasing(ff, y); };
    }
    std::ostringstream os;
    os << "f = " << f.name << ", g = " << g.name << ", L = " << nl.L;
    nl.description = os.str();
    return nl;
}

bool HypothesisReport::all_pass() const
{
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

const ConditionResult& HypothesisReport::get(const std::string& name) const
{
    for (const auto& c : conditions)
        if (c.name == name)
            return c;
    throw InvalidParameter("unknown hypothesis " + name);
}

HypothesisReport validate_hypotheses(const Nonlinearity& nl, std::size_t samples)
{
    samples = std::max<std::size_t>(samples, 16);
    double U = nl.bound();
    double s_hi = std::isfinite(U) ? 10.0 * U : 1e3;
    std::vector<double> s = log_samples(s_hi, samples);
    HypothesisReport rep;

    ConditionResult h1{"H1", true, std::nullopt, ""};
    if (nl.g(0.0) != 0.0) {
        h1.pass = false;
        h1.first_violation = 0.0;
        h1.detail = "g(0) != 0";
    } else {
        for (double x : s) {
            if (x > 0.0 && !(nl.g(x) > 0.0)) {
                h1.pass = false;
                h1.first_violation = x;
                h1.detail = "g(s) <= 0 for some s > 0";
                break;
            }
        }
    }
    rep.conditions.push_back(h1);

    ConditionResult h2{"H2", true, std::nullopt, ""};
    auto fail_h2 = [&](std::optional<double> at, const std::string& why) {
        if (h2.pass) {
            h2.pass = false;
            h2.first_violation = at;
            h2.detail = why;
        }
    };
    if (nl.f(0.0) != 0.0)
        fail_h2(0.0, "f(0) != 0");
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!(nl.f(s[i]) > nl.f(s[i - 1]))) {
            fail_h2(s[i], "f is not strictly increasing");
            break;
        }
    }
    if (!(nl.f_prime0 > 0.0))
        fail_h2(0.0, "f'(0) must be positive");
    else if (!(nl.f_prime0 < nl.g_prime0))
        fail_h2(0.0, "need f'(0) < g'(0)");
    bool exceeds = false;
    for (double x : s)
        if (std::isfinite(nl.g_sup) && nl.f(x) > nl.g_sup) {
            exceeds = true;
            break;
        }
    if (!exceeds)
        fail_h2(std::nullopt, "f does not exceed sup g on the sampled range");
    rep.conditions.push_back(h2);

    ConditionResult e11{"e11", true, std::nullopt, ""};
    for (double x : s) {
        if (x > 0.0 && nl.g(x) > nl.L * x * (1.0 + 1e-12)) {
            e11.pass = false;
            e11.first_violation = x;
            e11.detail = "g(s) > L s";
            break;
        }
    }
    if (e11.pass && nl.L < nl.g_prime0) {
        e11.pass = false;
        e11.first_violation = 0.0;
        e11.detail = "L < g'(0)";
    }
    rep.conditions.push_back(e11);

    ConditionResult con1{"con1", true, std::nullopt, ""};
    for (double x : s) {
        if (nl.f(x) < nl.f_inf_slope * x * (1.0 - 1e-12)) {
            con1.pass = false;
            con1.first_violation = x;
            con1.detail = "f(s) < inf f' * s";
            break;
        }
    }
    rep.conditions.push_back(con1);
    return rep;
}

double select_beta(const Nonlinearity& nl)
{
    double U = nl.bound();
    if (!std::isfinite(U))
        throw InvalidParameter("select_beta: the bound sup g / inf f' is not finite");
    double sup = nl.f_prime0;
    constexpr int n = 4000;
    for (int i = 0; i <= n; ++i) {
        double x = U * static_cast<double>(i) / n;
        double d = nl.f_prime ? nl.f_prime(x) : nl.f_prime0;
        if (!std::isfinite(d) || d > 1e12) {
            std::ostringstream os;
            os << "select_beta: f' diverges near s = " << x;
            throw UnboundedDerivative(os.str());
        }
        sup = std::max(sup, d);
    }
    return std::max(2.0 * nl.f_prime0, sup) + 1.0;
}

Regularized regularize(const Nonlinearity& nl, double beta, int n)
{
    if (n < 1)
        throw InvalidParameter("regularize: n must be >= 1");
    Regularized r;
    double t = 1.0 / n;
    r.threshold = t;
    double L = nl.L;
    auto g = nl.g;
    r.g_n = [g, L, t](double s) { return s <= t ? L * s : std::max(L * t, g(s)); };
    double slope = beta - nl.f_inf_slope;
    auto f = nl.f;
    r.f_beta_n = [f, beta, slope, t](double s) {
        return s <= t ? slope * s : std::max(slope * t, beta * s - f(s));
    };
    return r;
}

FixedPointReport fixed_points_of_fg(const Nonlinearity& nl)
{
    FixedPointReport rep;
    rep.G_prime0 = nl.f_prime0 > 0.0 ? nl.g_prime0 / nl.f_prime0 : inf;
    double U = nl.bound();
    double s_hi = std::isfinite(U) ? 10.0 * U : 1e3;
    auto h = [&](double s) { return nl.f(s) - nl.g(s); };
    constexpr std::size_t n = 4000;
    std::vector<double> s = log_samples(s_hi, n);
    std::vector<double> roots;
    double prev = h(s[1]);
    for (std::size_t i = 2; i < s.size(); ++i) {
        double cur = h(s[i]);
        if (cur == 0.0) {
            roots.push_back(s[i]);
        } else if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
            std::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(
                h, s[i - 1], s[i], prev, cur,
                boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2), iters);
            roots.push_back(0.5 * (a + b));
        }
        prev = cur;
    }
    if (roots.empty())
        throw NoPositiveFixedPoint("f = g has no positive solution in (0, 10 U]");

    std::vector<double> seeds;
    for (int i = 0; i < 16; ++i)
        seeds.push_back(s_hi * std::pow(10.0, -6.0 + 6.0 * i / 15.0));
    std::vector<double> limits;
    for (double x : seeds) {
        double y = x;
        for (int it = 0; it < 10000; ++it)
            y = nl.f_inverse(nl.g(y));
        limits.push_back(y);
    }
    for (double k : roots) {
        bool all = std::all_of(limits.begin(), limits.end(), [k](double y) {
            return std::abs(y - k) < 1e-8 * std::max(1.0, k);
        });
        rep.points.push_back({k, all});
    }
    return rep;
}

} // namespace semiwave::profile
