#include "oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace semiwave::fixtures::oracle {

namespace {

using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
using gl = boost::math::quadrature::gauss<double, 10>;

// Offset in [0, h) of the first node at or below x, relative to x.
double node_phase(double x, double t_min, double h)
{
    double u = (x - t_min) / h;
    double frac = u - std::floor(u);
    if (frac < 1e-9 || frac > 1.0 - 1e-9)
        return 0.0;
    return frac * h;
}

double gk_integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13)
{
    return gk::integrate(f, a, b, 25, tol);
}

} // namespace

double marine_transform(double z, double c, double v, double d, double mu)
{
    return mu / (mu + (c - v) * z - d * z * z);
}

double marine_R(double z, double c, double q, double p, double v, double d, double mu)
{
    return z * z - c * z - q + p * marine_transform(z, c, v, d, mu);
}

double marine_pole(double c, double v, double d, double mu)
{
    double b = c - v;
    return (b + std::sqrt(b * b + 4.0 * d * mu)) / (2.0 * d);
}

double marine_k2_riemann(double r, double c, double v, double d, double mu, double s_max, long cells)
{
    const double ds = s_max / static_cast<double>(cells);
    double sum = 0.0;
    for (long i = 0; i < cells; ++i) {
        double s = (static_cast<double>(i) + 0.5) * ds;
        double w = r - c * s;
        double e = -(w + v * s) * (w + v * s) / (4.0 * d * s) - mu * s;
        sum += mu * std::exp(e) / (2.0 * std::sqrt(std::numbers::pi * d * s));
    }
    return sum * ds;
}

double scan_minimal_speed(const std::function<double(double, double)>& R,
                          const std::function<double(double)>& z_hi, double c_lo, double c_hi,
                          double c_step, int z_points)
{
    long steps = std::lround((c_hi - c_lo) / c_step);
    for (long k = 0; k <= steps; ++k) {
        double c = c_lo + static_cast<double>(k) * c_step;
        double top = z_hi(c);
        for (int j = 1; j < z_points; ++j) {
            double z = top * j / z_points;
            if (R(z, c) <= 0.0)
                return c;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double min_over_z(const std::function<double(double)>& R, double z_hi, int points)
{
    double best = std::numeric_limits<double>::infinity();
    int arg = 1;
    for (int j = 1; j < points; ++j) {
        double v = R(z_hi * j / points);
        if (v < best) {
            best = v;
            arg = j;
        }
    }
    double a = z_hi * (arg - 1) / points;
    double b = z_hi * (arg + 1) / points;
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = R(x1), f2 = R(x2);
    for (int k = 0; k < 200 && b - a > 1e-15 * std::max(1.0, b); ++k) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = R(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = R(x2);
        }
    }
    return std::min({best, f1, f2});
}

double tangency_speed(const std::function<double(double, double)>& R, const std::function<double(double)>& z_hi,
                      double c_lo, double c_hi, double tol)
{
    auto m = [&](double c) { return min_over_z([&](double z) { return R(z, c); }, z_hi(c)); };
    return bisect(m, c_lo, c_hi, tol);
}

double bisect(const std::function<double(double)>& f, double a, double b, double tol)
{
    double fa = f(a);
    if ((fa > 0) == (f(b) > 0))
        throw std::invalid_argument("bisect: no sign change");
    while (b - a > tol) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double benchmark_transform(double z, double c)
{
    return std::exp(0.5 * z * z) / (1.0 + c * z);
}

double benchmark_lambda1(double c)
{
    auto R = [c](double z) { return z * z - c * z - 1.0 + 2.0 * benchmark_transform(z, c); };
    const double top = (c + std::sqrt(c * c + 4.0)) / 2.0;
    double prev = 0.0;
    for (int j = 1; j <= 100000; ++j) {
        double z = top * j / 100000.0;
        if (R(z) <= 0.0)
            return bisect(R, prev, z);
        prev = z;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double benchmark_k2(double r, double c)
{
    // Exp(rate 1/c) plus N(0, 1).
    const double lam = 1.0 / c;
    double z = r - lam;
    return lam * std::exp(-lam * r + 0.5 * lam * lam) * 0.5 * boost::math::erfc(-z / std::numbers::sqrt2);
}

double Trajectory::operator()(double s) const
{
    if (s <= t.front())
        return y.front();
    if (s >= t.back()) {
        // Linear approach along the stable direction.
        return kappa - (kappa - y.back()) * std::exp(rate * (s - t.back()));
    }
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    double u = (s - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - u) * y[i] + u * y[i + 1];
}

Trajectory shoot_local(double c, const std::function<double(double)>& f, const std::function<double(double)>& g,
                       double slope_at_kappa, double kappa, double level, double eps, double dt)
{
    namespace ode = boost::numeric::odeint;
    using state = std::array<double, 2>;
    // y'' - c y' - a y = 0 near kappa, a = f'(kappa) - g'(kappa).
    const double rate = (c - std::sqrt(c * c + 4.0 * slope_at_kappa)) / 2.0;
    auto rhs = [&](const state& x, state& dx, double) {
        dx[0] = x[1];
        dx[1] = c * x[1] + f(x[0]) - g(x[0]);
    };
    state x{kappa - eps, -rate * eps};
    std::vector<double> ts, ys;
    auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<state>());
    double t = 0.0;
    ts.push_back(t);
    ys.push_back(x[0]);
    stepper.initialize(x, t, -dt);
    while (x[0] > 1e-12 * kappa && t > -500.0) {
        stepper.do_step(rhs);
        while (stepper.current_time() <= t - dt && x[0] > 1e-12 * kappa) {
            t -= dt;
            stepper.calc_state(t, x);
            ts.push_back(t);
            ys.push_back(x[0]);
        }
        x = stepper.current_state();
    }
    std::reverse(ts.begin(), ts.end());
    std::reverse(ys.begin(), ys.end());
    auto it = std::find_if(ys.begin(), ys.end(), [&](double v) { return v >= level; });
    if (it == ys.begin() || it == ys.end())
        throw std::runtime_error("shoot_local: level not crossed");
    std::size_t i = static_cast<std::size_t>(it - ys.begin());
    double t0 = ts[i - 1] + (level - ys[i - 1]) / (ys[i] - ys[i - 1]) * (ts[i] - ts[i - 1]);
    for (double& s : ts)
        s -= t0;
    Trajectory tr;
    tr.t = std::move(ts);
    tr.y = std::move(ys);
    tr.rate = rate;
    tr.kappa = kappa;
    return tr;
}

double lerp_nodes(const std::vector<double>& v, double t_min, double h, double t)
{
    double x = (t - t_min) / h;
    if (x < 0.0) {
        if (x <= -1.0)
            return 0.0;
        return (1.0 + x) * v.front();
    }
    double last = static_cast<double>(v.size() - 1);
    if (x >= last)
        return v.back();
    std::size_t i = static_cast<std::size_t>(x);
    double u = x - static_cast<double>(i);
    return (1.0 - u) * v[i] + u * v[i + 1];
}

double lerp_nodes_hold(const std::vector<double>& v, double t_min, double h, double t)
{
    if (t <= t_min)
        return v.front();
    return lerp_nodes(v, t_min, h, t);
}

double epidemic_dirac_psi(const std::vector<double>& g_nodes, double t_min, double h, double alpha, double c,
                          double t)
{
    auto f = [&](double w) { return lerp_nodes(g_nodes, t_min, h, t - c * w) * std::exp(-alpha * w); };
    const double w_end = 50.0 / alpha;
    // Pieces run node to node in t - c w, so the integrand is smooth on each.
    const double dw = h / std::abs(c);
    double w = node_phase(t, t_min, h) / std::abs(c);
    double sum = w > 0.0 ? gl::integrate(f, 0.0, w) : 0.0;
    for (; w < w_end; w += dw)
        sum += gl::integrate(f, w, w + dw);
    return sum;
}

double population_psi(const std::vector<double>& g_nodes, double t_min, double h, double D, double gamma,
                      double c, const std::function<double(double)>& k2, double r_lo, double r_hi, double t)
{
    using gl5 = boost::math::quadrature::gauss<double, 5>;
    using gl15 = boost::math::quadrature::gauss<double, 15>;
    const double sigma = std::sqrt(c * c + 4.0 * D * gamma);
    const double nu = (c - sigma) / (2.0 * D);
    const double mu = (c + sigma) / (2.0 * D);
    auto k1 = [&](double s) { return (s >= 0.0 ? std::exp(nu * s) : std::exp(mu * s)) / sigma; };
    auto G = [&](double u) { return lerp_nodes_hold(g_nodes, t_min, h, u); };
    // Smooth part A(u) = int k2(r) G(u - r) dr on node-aligned pieces in r.
    auto A = [&](double u) {
        auto inner = [&](double r) { return k2(r) * G(u - r); };
        double first = r_lo + node_phase(u - r_lo, t_min, h);
        double sum = first > r_lo ? gl5::integrate(inner, r_lo, first) : 0.0;
        for (double a = first; a < r_hi; a += h)
            sum += gl5::integrate(inner, a, std::min(a + h, r_hi));
        return sum;
    };
    const double s_lo = -25.0 / mu;
    const double s_hi = 25.0 / -nu;
    // int k1(s) G(t - s) ds: kinks at s = 0 and where t - s hits a node.
    auto kg = [&](double s) { return k1(s) * G(t - s); };
    const double phase = node_phase(t, t_min, h);
    double part_g = phase > 0.0 ? gl5::integrate(kg, 0.0, phase) : 0.0;
    for (double a = phase; a < s_hi; a += h)
        part_g += gl5::integrate(kg, a, a + h);
    const double up = phase > 0.0 ? phase - h : -h;
    if (up < 0.0 && phase > 0.0)
        part_g += gl5::integrate(kg, up, 0.0);
    for (double b = phase > 0.0 ? up : 0.0; b > s_lo; b -= h)
        part_g += gl5::integrate(kg, b - h, b);
    auto ka = [&](double s) { return k1(s) * A(t - s); };
    double part_a = 0.0;
    for (double a = 0.0; a < s_hi; a += 1.0)
        part_a += gl15::integrate(ka, a, a + 1.0);
    for (double a = 0.0; a > s_lo; a -= 1.0)
        part_a += gl15::integrate(ka, a - 1.0, a);
    return part_g - part_a;
}

std::vector<double> direct_convolution(const std::vector<double>& v, const std::function<double(long)>& w)
{
    const long n = static_cast<long>(v.size());
    std::vector<double> out(v.size(), 0.0);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            out[static_cast<std::size_t>(i)] += w(i - j) * v[static_cast<std::size_t>(j)];
    return out;
}

} // namespace semiwave::fixtures::oracle
