#include "semiwave/law.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

namespace semiwave::kernels {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

enum class Kind { Atoms, Exponential, Gamma, Gaussian, Laplace, Uniform, Custom, ExpDelayed };

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw InvalidParameter(what);
}

} // namespace

struct Law1D::Impl {
    Kind kind = Kind::Atoms;
    std::string name;
    std::vector<Atom> atoms;
    std::optional<DensitySpec> density;
    // Parameters of the built-in families, kept for closed-form shortcuts.
    double p1 = 0.0;
    double p2 = 0.0;
};

Law1D::Law1D(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Law1D Law1D::dirac(double at)
{
    require(std::isfinite(at), "dirac: location must be finite");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Atoms;
    std::ostringstream os;
    os << "dirac(" << at << ")";
    impl->name = os.str();
    impl->atoms = {{at, 1.0}};
    return Law1D(impl);
}

Law1D Law1D::atoms(std::vector<Atom> atoms)
{
    require(!atoms.empty(), "atoms: at least one atom required");
    double total = 0.0;
    for (const auto& a : atoms) {
        require(std::isfinite(a.at), "atoms: locations must be finite");
        require(a.weight >= 0.0 && std::isfinite(a.weight), "atoms: weights must be nonnegative");
        total += a.weight;
    }
    require(std::abs(total - 1.0) < 1e-12, "atoms: weights must sum to 1");
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.at < y.at; });
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Atoms;
    impl->name = "atoms";
    impl->atoms = std::move(atoms);
    return Law1D(impl);
}

Law1D Law1D::exponential(double rate)
{
    require(rate > 0.0 && std::isfinite(rate), "exponential: rate must be positive");
    DensitySpec d;
    std::ostringstream os;
    os << "exponential(" << rate << ")";
    d.name = os.str();
    d.pdf = [rate](double x) { return x < 0.0 ? 0.0 : rate * std::exp(-rate * x); };
    d.laplace = [rate](double th) { return rate / (rate + th); };
    d.laplace_domain = {-rate, inf};
    d.support = [rate](double tol) { return Interval{0.0, std::log(1.0 / tol) / rate}; };
    d.breakpoints = {0.0};
    d.center = 0.0;
    d.scale = 1.0 / rate;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Exponential;
    impl->name = d.name;
    impl->p1 = rate;
    impl->density = std::move(d);
    return Law1D(impl);
}

Law1D Law1D::gamma(double shape, double rate)
{
    require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be positive");
    boost::math::gamma_distribution<double> dist(shape, 1.0 / rate);
    DensitySpec d;
    std::ostringstream os;
    os << "gamma(" << shape << ", " << rate << ")";
    d.name = os.str();
    d.pdf = [dist](double x) { return x <= 0.0 ? 0.0 : boost::math::pdf(dist, x); };
    d.laplace = [shape, rate](double th) { return std::pow(rate / (rate + th), shape); };
    d.laplace_domain = {-rate, inf};
    d.support = [dist](double tol) {
        return Interval{0.0, boost::math::quantile(boost::math::complement(dist, tol))};
    };
    d.breakpoints = {0.0};
    d.center = shape > 1.0 ? (shape - 1.0) / rate : 0.0;
    d.scale = std::sqrt(shape) / rate;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Gamma;
    impl->name = d.name;
    impl->p1 = shape;
    impl->p2 = rate;
    impl->density = std::move(d);
    return Law1D(impl);
}

Law1D Law1D::gaussian(double mean, double variance)
{
    require(std::isfinite(mean), "gaussian: mean must be finite");
    require(variance > 0.0 && std::isfinite(variance), "gaussian: variance must be positive");
    double sd = std::sqrt(variance);
    DensitySpec d;
    std::ostringstream os;
    os << "gaussian(" << mean << ", " << variance << ")";
    d.name = os.str();
    d.pdf = [mean, variance, sd](double x) {
        double u = x - mean;
        return std::exp(-u * u / (2.0 * variance)) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    d.laplace = [mean, variance](double th) { return std::exp(-th * mean + 0.5 * th * th * variance); };
    d.support = [mean, sd](double tol) {
        boost::math::normal_distribution<double> n(0.0, 1.0);
        double zq = boost::math::quantile(boost::math::complement(n, 0.5 * tol));
        return Interval{mean - zq * sd, mean + zq * sd};
    };
    d.center = mean;
    d.scale = sd;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Gaussian;
    impl->name = d.name;
    impl->p1 = mean;
    impl->p2 = variance;
    impl->density = std::move(d);
    return Law1D(impl);
}

Law1D Law1D::laplace_law(double mean, double scale)
{
    require(std::isfinite(mean), "laplace: mean must be finite");
    require(scale > 0.0 && std::isfinite(scale), "laplace: scale must be positive");
    DensitySpec d;
    std::ostringstream os;
    os << "laplace(" << mean << ", " << scale << ")";
    d.name = os.str();
    d.pdf = [mean, scale](double x) { return std::exp(-std::abs(x - mean) / scale) / (2.0 * scale); };
    d.laplace = [mean, scale](double th) {
        return std::exp(-th * mean) / (1.0 - scale * scale * th * th);
    };
    d.laplace_domain = {-1.0 / scale, 1.0 / scale};
    d.support = [mean, scale](double tol) {
        double r = scale * std::log(1.0 / tol);
        return Interval{mean - r, mean + r};
    };
    d.breakpoints = {mean};
    d.center = mean;
    d.scale = scale;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Laplace;
    impl->name = d.name;
    impl->p1 = mean;
    impl->p2 = scale;
    impl->density = std::move(d);
    return Law1D(impl);
}

Law1D Law1D::uniform(double lo, double hi)
{
    require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "uniform: need lo < hi");
    DensitySpec d;
    std::ostringstream os;
    os << "uniform(" << lo << ", " << hi << ")";
    d.name = os.str();
    double w = hi - lo;
    d.pdf = [lo, hi, w](double x) { return (x < lo || x > hi) ? 0.0 : 1.0 / w; };
    d.laplace = [lo, w](double th) {
        double u = th * w;
        if (std::abs(u) < 1e-300)
            return std::exp(-th * lo);
        return std::exp(-th * lo) * (-std::expm1(-u)) / u;
    };
    d.support = [lo, hi](double) { return Interval{lo, hi}; };
    d.breakpoints = {lo, hi};
    d.center = 0.5 * (lo + hi);
    d.scale = w;
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Uniform;
    impl->name = d.name;
    impl->p1 = lo;
    impl->p2 = hi;
    impl->density = std::move(d);
    return Law1D(impl);
}

Law1D Law1D::from_density(DensitySpec spec)
{
    require(static_cast<bool>(spec.pdf), "density law: pdf required");
    require(static_cast<bool>(spec.support), "density law: support bound required");
    require(spec.scale > 0.0, "density law: scale hint must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Custom;
    impl->name = spec.name.empty() ? "custom" : spec.name;
    impl->density = std::move(spec);
    return Law1D(impl);
}

Law1D Law1D::with_exponential_delay(double rate) const
{
    require(rate > 0.0 && std::isfinite(rate), "exponential delay: rate must be positive");
    const Impl& src = *impl_;
    DensitySpec d;
    std::ostringstream os;
    os << src.name << " * exponential(" << rate << ")";
    d.name = os.str();

    std::vector<Atom> atoms = src.atoms;
    std::optional<DensitySpec> dens = src.density;
    std::function<double(double)> dens_part;
    if (dens) {
        if (src.kind == Kind::Exponential) {
            double eta = src.p1;
            if (std::abs(eta - rate) < 1e-12 * rate) {
                dens_part = [rate](double x) { return x < 0.0 ? 0.0 : rate * rate * x * std::exp(-rate * x); };
            } else {
                dens_part = [rate, eta](double x) {
                    if (x < 0.0)
                        return 0.0;
                    return rate * eta / (rate - eta) * (std::exp(-eta * x) - std::exp(-rate * x));
                };
            }
        } else if (src.kind == Kind::Gamma) {
            double k = src.p1, eta = src.p2;
            double lg = std::lgamma(k + 1.0);
            if (rate >= eta) {
                dens_part = [k, eta, rate, lg](double x) {
                    if (x <= 0.0)
                        return 0.0;
                    double y = (rate - eta) * x;
                    double f = y == 0.0 ? 1.0 : boost::math::hypergeometric_1F1(1.0, k + 1.0, -y);
                    return rate * std::exp(k * std::log(eta * x) - eta * x - lg) * f;
                };
            } else {
                double scale = rate * std::pow(eta / (eta - rate), k);
                dens_part = [k, eta, rate, scale](double x) {
                    if (x <= 0.0)
                        return 0.0;
                    return scale * std::exp(-rate * x) * boost::math::gamma_p(k, (eta - rate) * x);
                };
            }
        } else if (src.kind == Kind::Uniform) {
            double lo = src.p1, hi = src.p2;
            dens_part = [lo, hi, rate](double x) {
                if (x <= lo)
                    return 0.0;
                double near = -std::expm1(-rate * (x - lo));
                if (x <= hi)
                    return near / (hi - lo);
                return std::exp(-rate * (x - hi)) * -std::expm1(-rate * (hi - lo)) / (hi - lo);
            };
        } else {
            auto pdf = dens->pdf;
            auto supp = dens->support(1e-14);
            auto cuts = dens->breakpoints;
            dens_part = [pdf, supp, cuts, rate](double x) {
                double hi = std::min(x, supp.hi);
                if (hi <= supp.lo)
                    return 0.0;
                auto integrand = [&](double r) { return pdf(r) * std::exp(-rate * (x - r)); };
                return rate * numerics::integrate_pieces(integrand, supp.lo, hi, cuts, 1e-14, 1e-10).value;
            };
        }
    }
    d.pdf = [atoms, dens_part, rate](double x) {
        double v = 0.0;
        for (const auto& a : atoms)
            if (x >= a.at)
                v += a.weight * rate * std::exp(-rate * (x - a.at));
        if (dens_part)
            v += dens_part(x);
        return v;
    };

    Law1D self = *this;
    d.laplace = [self, rate](double th) {
        auto base = self.laplace(th);
        return base ? rate / (rate + th) * *base : std::numeric_limits<double>::quiet_NaN();
    };
    Interval dom = laplace_domain();
    d.laplace_domain = {std::max(dom.lo, -rate), dom.hi};
    d.support = [self, rate](double tol) {
        Interval s = self.support(0.5 * tol);
        return Interval{s.lo, s.hi + std::log(2.0 / tol) / rate};
    };
    for (const auto& a : atoms)
        d.breakpoints.push_back(a.at);
    if (dens)
        for (double b : dens->breakpoints)
            d.breakpoints.push_back(b);
    d.center = center() + 1.0 / rate;
    d.scale = std::max(scale(), 1.0 / rate);

    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ExpDelayed;
    impl->name = d.name;
    impl->p1 = rate;
    impl->density = std::move(d);
    return Law1D(impl);
}

const std::vector<Atom>& Law1D::atom_list() const { return impl_->atoms; }

bool Law1D::has_density() const { return impl_->density.has_value(); }

double Law1D::pdf(double x) const { return impl_->density ? impl_->density->pdf(x) : 0.0; }

double Law1D::mass() const
{
    double m = impl_->density ? impl_->density->mass : 0.0;
    for (const auto& a : impl_->atoms)
        m += a.weight;
    return m;
}

std::optional<double> Law1D::laplace(double theta) const
{
    double v = 0.0;
    for (const auto& a : impl_->atoms)
        v += a.weight * std::exp(-theta * a.at);
    if (impl_->density) {
        if (!impl_->density->laplace)
            return std::nullopt;
        Interval dom = impl_->density->laplace_domain;
        if (!(theta > dom.lo && theta < dom.hi))
            return inf;
        v += impl_->density->laplace(theta);
    }
    return v;
}

Interval Law1D::laplace_domain() const
{
    if (impl_->density)
        return impl_->density->laplace_domain;
    return {-inf, inf};
}

Interval Law1D::support(double tail_tol) const
{
    double lo = inf;
    double hi = -inf;
    for (const auto& a : impl_->atoms) {
        lo = std::min(lo, a.at);
        hi = std::max(hi, a.at);
    }
    if (impl_->density) {
        Interval s = impl_->density->support(tail_tol);
        lo = std::min(lo, s.lo);
        hi = std::max(hi, s.hi);
    }
    return {lo, hi};
}

std::vector<double> Law1D::breakpoints() const
{
    return impl_->density ? impl_->density->breakpoints : std::vector<double>{};
}

double Law1D::center() const
{
    if (impl_->density)
        return impl_->density->center;
    double m = 0.0;
    for (const auto& a : impl_->atoms)
        m += a.weight * a.at;
    return m;
}

double Law1D::scale() const { return impl_->density ? impl_->density->scale : 0.0; }

bool Law1D::nonnegative_support(double tail_tol) const
{
    return support(tail_tol).lo >= 0.0;
}

const std::string& Law1D::name() const { return impl_->name; }

} // namespace semiwave::kernels
