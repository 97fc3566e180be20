#include "semiwave/projection.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace semiwave::kernels {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double projection_abs_tol = 1e-13;

// int_0^{s_max} K(s, r - c s) ds for a joint kernel. The integrand is located
// on a logarithmic scan first so that adaptive refinement sees its peak.
double joint_k2(const JointKernelSpec& js, double c, double r)
{
    const double s_max = js.box.s_max;
    auto f = [&](double s) {
        if (s <= 0.0)
            return 0.0;
        double e = js.log_density(s, r - c * s);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    constexpr int scan = 240;
    double best = 0.0;
    double s_best = s_max;
    std::vector<double> xs(scan + 1);
    std::vector<double> fs(scan + 1);
    for (int i = 0; i <= scan; ++i) {
        xs[i] = s_max * std::pow(10.0, -12.0 + 12.0 * i / scan);
        fs[i] = f(xs[i]);
        if (fs[i] > best) {
            best = fs[i];
            s_best = xs[i];
        }
    }
    if (best == 0.0)
        return 0.0;
    std::vector<double> cuts{s_best, 0.5 * s_best, 2.0 * s_best};
    for (int i = 0; i <= scan; ++i) {
        bool above = fs[i] > 1e-3 * best;
        bool prev = i > 0 && fs[i - 1] > 1e-3 * best;
        if (above != prev && i > 0)
            cuts.push_back(xs[i]);
    }
    if (js.tilted_w && c != 0.0) {
        // Where r - c s meets the w-centre of the kernel at delay s.
        double lo = 0.0;
        double hi = s_max;
        auto g = [&](double s) { return r - c * s - js.tilted_w(s, 0.0).first; };
        if (g(lo + 1e-300) * g(hi) < 0.0) {
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                (g(lo + 1e-300) * g(mid) <= 0.0 ? hi : lo) = mid;
            }
            double s0 = 0.5 * (lo + hi);
            double width = js.tilted_w(s0, 0.0).second / std::abs(c);
            for (double k : {-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0}) {
                double x = s0 + k * width;
                if (x > 0.0 && x < s_max)
                    cuts.push_back(x);
            }
        }
    }
    // Decade cuts resolve the s^{-1/2} behaviour near zero delay; the
    // innermost piece goes to tanh-sinh, which tolerates the endpoint.
    for (double x = s_best; x > 1e-12 * s_max; x *= 0.1)
        cuts.push_back(x);
    for (double x = 10.0 * s_best; x < s_max; x *= 10.0)
        cuts.push_back(x);
    const double first = 1e-12 * s_max;
    double inner = boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, first);
    return inner + numerics::integrate_pieces(f, first, s_max, cuts, projection_abs_tol, 1e-10).value;
}

// Density part of k2 for a separable kernel with density factors P and J.
double separable_density_density(const Law1D& P, const Law1D& J, double c, double r)
{
    Interval sp = P.support(1e-14);
    Interval sj = J.support(1e-14);
    if (c == 0.0)
        return J.pdf(r);
    // s with r - c s in [sj.lo, sj.hi].
    double a = (r - sj.hi) / c;
    double b = (r - sj.lo) / c;
    if (a > b)
        std::swap(a, b);
    double lo = std::max(sp.lo, a);
    double hi = std::min(sp.hi, b);
    if (!(hi > lo))
        return 0.0;
    auto f = [&](double s) { return P.pdf(s) * J.pdf(r - c * s); };
    std::vector<double> cuts = P.breakpoints();
    for (double bj : J.breakpoints())
        cuts.push_back((r - bj) / c);
    double s0 = (r - J.center()) / c;
    double w = J.scale() / std::abs(c);
    for (double k : {-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0})
        cuts.push_back(s0 + k * w);
    cuts.push_back(P.center());
    return numerics::integrate_pieces(f, lo, hi, cuts, projection_abs_tol, 1e-11).value;
}

} // namespace

ProjectedKernel projection(const Kernel& k, double c)
{
    ProjectedKernel out;
    out.c = c;
    if (!k.is_separable()) {
        const JointKernelSpec& js = k.joint_spec();
        const SupportBox& box = js.box;
        out.density = [js, c](double r) { return joint_k2(js, c, r); };
        double a = c * box.s_max;
        out.support = {std::min(0.0, a) + box.w_min, std::max(0.0, a) + box.w_max};
        return out;
    }

    const Law1D& P = k.temporal();
    const Law1D& J = k.spatial();
    const double tail = 0.5 * k.tail_tol();
    Interval sp = P.support(tail);
    Interval sj = J.support(tail);

    // atom x atom
    for (const auto& tp : P.atom_list())
        for (const auto& sa : J.atom_list())
            out.atoms.push_back({c * tp.at + sa.at, tp.weight * sa.weight});
    // density(P) x atom(J) collapses to atoms when c == 0
    if (c == 0.0 && P.has_density())
        for (const auto& sa : J.atom_list())
            out.atoms.push_back({sa.at, sa.weight});
    for (const auto& a : out.atoms)
        out.atom_mass += a.weight;

    std::vector<std::function<double(double)>> parts;
    double lo = inf;
    double hi = -inf;
    if (J.has_density()) {
        for (const auto& tp : P.atom_list()) {
            double shift = c * tp.at;
            double wgt = tp.weight;
            parts.push_back([J, shift, wgt](double r) { return wgt * J.pdf(r - shift); });
            lo = std::min(lo, shift + sj.lo);
            hi = std::max(hi, shift + sj.hi);
            for (double b : J.breakpoints())
                out.breakpoints.push_back(shift + b);
        }
    }
    if (P.has_density() && c != 0.0) {
        for (const auto& sa : J.atom_list()) {
            double at = sa.at;
            double wgt = sa.weight;
            parts.push_back([P, at, wgt, c](double r) { return wgt * P.pdf((r - at) / c) / std::abs(c); });
            double e1 = at + c * sp.lo;
            double e2 = at + c * sp.hi;
            lo = std::min(lo, std::min(e1, e2));
            hi = std::max(hi, std::max(e1, e2));
            for (double b : P.breakpoints())
                out.breakpoints.push_back(at + c * b);
        }
    }
    if (P.has_density() && J.has_density()) {
        parts.push_back([P, J, c](double r) { return separable_density_density(P, J, c, r); });
        double e1 = c * sp.lo;
        double e2 = c * sp.hi;
        lo = std::min(lo, std::min(e1, e2) + sj.lo);
        hi = std::max(hi, std::max(e1, e2) + sj.hi);
        if (c == 0.0)
            for (double b : J.breakpoints())
                out.breakpoints.push_back(b);
    }
    if (!parts.empty()) {
        out.density = [parts](double r) {
            double v = 0.0;
            for (const auto& p : parts)
                v += p(r);
            return v;
        };
        out.support = {lo, hi};
    }
    std::sort(out.breakpoints.begin(), out.breakpoints.end());
    return out;
}

double project_k2(const Kernel& k, double c, double r)
{
    if (!k.is_separable())
        return joint_k2(k.joint_spec(), c, r);
    auto p = projection(k, c);
    if (!p.density)
        return 0.0;
    return p.density(r);
}

} // namespace semiwave::kernels
