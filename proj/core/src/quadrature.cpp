#include "semiwave/quadrature.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace semiwave::numerics {

namespace {

constexpr unsigned max_depth = 15;
constexpr int max_chunks = 80;

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol)
{
    QuadratureResult r;
    if (!(b > a))
        return r;
    // Boost's tolerance is relative to L1; fold the absolute target in.
    double err = 0.0;
    double l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth,
                                                                              rel_tol, &err, &l1);
    double target = std::max({abs_tol, rel_tol * l1, std::numeric_limits<double>::min()});
    if (err > 100.0 * target) {
        // Retry with more depth.
        r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth + 2, rel_tol,
                                                                                  &err, &l1);
        target = std::max({abs_tol, rel_tol * l1, std::numeric_limits<double>::min()});
    }
    if (err > 100.0 * target) {
        // Kronrod estimates have a floor on very short intervals; compare
        // Gauss-Legendre on the interval against its two halves instead.
        using gl = boost::math::quadrature::gauss<double, 20>;
        const double mid = 0.5 * (a + b);
        const double whole = gl::integrate(f, a, b);
        const double halves = gl::integrate(f, a, mid) + gl::integrate(f, mid, b);
        const double diff = std::abs(whole - halves);
        if (std::isfinite(halves) && diff <= target && std::abs(halves - r.value) <= 100.0 * target) {
            r.value = halves;
            err = diff;
        }
    }
    r.error = err;
    r.l1 = l1;
    if (!std::isfinite(r.value) || err > 100.0 * target) {
        std::ostringstream os;
        os << "adaptive quadrature on [" << a << ", " << b << "] did not converge (error estimate "
           << err << ", target " << target << ")";
        throw QuadratureFailure(os.str());
    }
    return r;
}

QuadratureResult integrate_pieces(const std::function<double(double)>& f, double a, double b,
                                  std::vector<double> cuts, double abs_tol, double rel_tol)
{
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> pts{a};
    for (double x : cuts)
        if (x > pts.back() && x < b)
            pts.push_back(x);
    pts.push_back(b);
    QuadratureResult total;
    double piece_tol = abs_tol / static_cast<double>(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = integrate(f, pts[i], pts[i + 1], piece_tol, rel_tol);
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
    }
    return total;
}

QuadratureResult integrate_outward(const std::function<double(double)>& f, double a, double b,
                                   double left_limit, double right_limit, double abs_tol,
                                   double rel_tol)
{
    QuadratureResult total = integrate(f, a, b, abs_tol, rel_tol);
    double width = std::max(b - a, 1e-12);

    double hi = b;
    double step = width;
    for (int k = 0; k < max_chunks && hi < right_limit; ++k) {
        double next = std::min(hi + step, right_limit);
        auto r = integrate(f, hi, next, abs_tol, rel_tol);
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
        hi = next;
        step *= 2.0;
        if (r.l1 < abs_tol)
            break;
        if (k + 1 == max_chunks)
            throw QuadratureFailure("outward quadrature did not reach a negligible right tail");
    }

    double lo = a;
    step = width;
    for (int k = 0; k < max_chunks && lo > left_limit; ++k) {
        double next = std::max(lo - step, left_limit);
        auto r = integrate(f, next, lo, abs_tol, rel_tol);
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
        lo = next;
        step *= 2.0;
        if (r.l1 < abs_tol)
            break;
        if (k + 1 == max_chunks)
            throw QuadratureFailure("outward quadrature did not reach a negligible left tail");
    }
    return total;
}

double gauss10(const std::function<double(double)>& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

} // namespace semiwave::numerics
