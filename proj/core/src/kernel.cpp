#include "semiwave/kernel.hpp"

#include "semiwave/errors.hpp"
#include "semiwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace semiwave::kernels {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// int pdf(x) e^{-theta x} dx over the density part of a law.
double tilted_density_integral(const Law1D& law, double theta, double abs_tol)
{
    if (!law.has_density())
        return 0.0;
    Interval s = law.support(1e-14);
    bool nonneg = s.lo >= 0.0;
    auto f = [&](double x) {
        double p = law.pdf(x);
        if (p == 0.0)
            return 0.0;
        return p * std::exp(-theta * x);
    };
    // Re-centre the starting window on the maximiser of the tilted density
    // for a Gaussian-like shape; fall back to the support.
    double lo = s.lo;
    double hi = s.hi;
    double shifted = law.center() - theta * law.scale() * law.scale();
    if (shifted > hi || shifted < lo) {
        double w = 12.0 * law.scale();
        lo = std::max(nonneg ? 0.0 : -inf, shifted - w);
        hi = shifted + w;
    }
    std::vector<double> cuts = law.breakpoints();
    cuts.push_back(law.center());
    cuts.push_back(shifted);
    auto core = numerics::integrate_pieces(f, lo, hi, cuts, abs_tol, 1e-12);
    double total = core.value;
    if (hi < inf) {
        auto right = numerics::integrate_outward(f, hi, hi + std::max(law.scale(), 1e-6), hi, inf,
                                                 abs_tol, 1e-12);
        total += right.value;
    }
    double left_limit = nonneg ? 0.0 : -inf;
    if (lo > left_limit) {
        double w = std::max(law.scale(), 1e-6);
        double a = std::max(left_limit, lo - w);
        auto left = numerics::integrate_outward(f, a, lo, left_limit, lo, abs_tol, 1e-12);
        total += left.value;
    }
    return total;
}

double tilted_law_integral(const Law1D& law, double theta, double abs_tol)
{
    double v = 0.0;
    for (const auto& a : law.atom_list())
        v += a.weight * std::exp(-theta * a.at);
    return v + tilted_density_integral(law, theta, abs_tol);
}

double law_mass_on(const Law1D& law, double lo, double hi, double abs_tol)
{
    double m = 0.0;
    for (const auto& a : law.atom_list())
        if (a.at >= lo && a.at <= hi)
            m += a.weight;
    if (law.has_density()) {
        Interval s = law.support(1e-16);
        double a = std::max(lo, s.lo);
        double b = std::min(hi, s.hi);
        if (b > a) {
            auto cuts = law.breakpoints();
            cuts.push_back(law.center());
            m += numerics::integrate_pieces([&](double x) { return law.pdf(x); }, a, b, cuts, abs_tol,
                                            1e-12)
                     .value;
        }
    }
    return m;
}

double normal_quantile_upper(double tail)
{
    boost::math::normal_distribution<double> n(0.0, 1.0);
    return boost::math::quantile(boost::math::complement(n, tail));
}

} // namespace

struct Kernel::Impl {
    bool separable = false;
    std::optional<Law1D> temporal;
    std::optional<Law1D> spatial;
    JointKernelSpec joint;
    std::string name;
};

Kernel::Kernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Kernel Kernel::separable(Law1D temporal, Law1D spatial)
{
    if (!temporal.nonnegative_support())
        throw InvalidParameter("separable kernel: temporal law must live on [0, inf)");
    if (std::abs(temporal.mass() - 1.0) > 1e-12 || std::abs(spatial.mass() - 1.0) > 1e-12)
        throw InvalidParameter("separable kernel: both factors must have unit mass");
    auto impl = std::make_shared<Impl>();
    impl->separable = true;
    impl->name = "separable[" + temporal.name() + " x " + spatial.name() + "]";
    impl->temporal = std::move(temporal);
    impl->spatial = std::move(spatial);
    return Kernel(impl);
}

Kernel Kernel::joint(JointKernelSpec spec)
{
    if (!spec.log_density)
        throw InvalidParameter("joint kernel: log density required");
    if (!spec.abscissa)
        throw InvalidParameter("joint kernel: abscissa required");
    if (!(spec.box.s_max > 0.0) || !(spec.box.w_max > spec.box.w_min))
        throw InvalidParameter("joint kernel: support box must be nonempty");
    auto impl = std::make_shared<Impl>();
    impl->separable = false;
    impl->name = spec.name.empty() ? "joint" : spec.name;
    impl->joint = std::move(spec);
    return Kernel(impl);
}

bool Kernel::is_separable() const { return impl_->separable; }

const Law1D& Kernel::temporal() const
{
    if (!impl_->separable)
        throw InvalidParameter("kernel is not separable");
    return *impl_->temporal;
}

const Law1D& Kernel::spatial() const
{
    if (!impl_->separable)
        throw InvalidParameter("kernel is not separable");
    return *impl_->spatial;
}

const JointKernelSpec& Kernel::joint_spec() const
{
    if (impl_->separable)
        throw InvalidParameter("kernel is separable");
    return impl_->joint;
}

bool Kernel::has_atoms() const
{
    return impl_->separable && (!impl_->temporal->atom_list().empty() || !impl_->spatial->atom_list().empty());
}

double Kernel::density(double s, double w) const
{
    if (impl_->separable) {
        if (has_atoms())
            throw InvalidParameter("kernel has Dirac components; density is not a function");
        return impl_->temporal->pdf(s) * impl_->spatial->pdf(w);
    }
    if (s <= 0.0)
        return 0.0;
    return std::exp(impl_->joint.log_density(s, w));
}

double Kernel::log_density(double s, double w) const
{
    if (impl_->separable)
        return std::log(density(s, w));
    if (s <= 0.0)
        return -inf;
    return impl_->joint.log_density(s, w);
}

bool Kernel::has_closed_transform() const
{
    if (impl_->separable)
        return impl_->temporal->laplace(0.0).has_value() && impl_->spatial->laplace(0.0).has_value();
    return static_cast<bool>(impl_->joint.transform);
}

std::optional<double> Kernel::closed_transform(double z, double c) const
{
    if (impl_->separable) {
        auto t = impl_->temporal->laplace(z * c);
        auto s = impl_->spatial->laplace(z);
        if (!t || !s)
            return std::nullopt;
        return *t * *s;
    }
    if (!impl_->joint.transform)
        return std::nullopt;
    return impl_->joint.transform(z, c);
}

double Kernel::abscissa(double c) const
{
    if (!impl_->separable)
        return impl_->joint.abscissa(c);
    Interval dt = impl_->temporal->laplace_domain();
    Interval ds = impl_->spatial->laplace_domain();
    double g = ds.hi;
    if (c > 0.0)
        g = std::min(g, dt.hi / c);
    else if (c < 0.0)
        g = std::min(g, dt.lo / c);
    return g;
}

TransformDomain Kernel::domain(double c) const { return {c, 0.0, abscissa(c)}; }

SupportBox Kernel::support_box() const
{
    if (!impl_->separable)
        return impl_->joint.box;
    Interval t = impl_->temporal->support(0.5 * default_tail_tol);
    Interval s = impl_->spatial->support(0.5 * default_tail_tol);
    return {std::max(t.hi, 0.0), s.lo, s.hi};
}

double Kernel::tail_tol() const
{
    return impl_->separable ? default_tail_tol : impl_->joint.tail_tol;
}

const std::string& Kernel::name() const { return impl_->name; }

Kernel make_separable_kernel(Law1D temporal, Law1D spatial)
{
    return Kernel::separable(std::move(temporal), std::move(spatial));
}

Kernel make_marine_kernel(double v, double d, double mu)
{
    if (!(v > 0.0) || !(d > 0.0) || !(mu > 0.0) || !std::isfinite(v) || !std::isfinite(d) ||
        !std::isfinite(mu))
        throw InvalidParameter("marine kernel: v_j, d_j and mu_j must be positive");
    JointKernelSpec spec;
    std::ostringstream os;
    os << "marine(v=" << v << ", d=" << d << ", mu=" << mu << ")";
    spec.name = os.str();
    double log_mu = std::log(mu);
    spec.log_density = [v, d, mu, log_mu](double s, double w) {
        if (s <= 0.0)
            return -inf;
        double u = w + v * s;
        return log_mu - u * u / (4.0 * d * s) - mu * s - 0.5 * std::log(4.0 * std::numbers::pi * d * s);
    };
    spec.transform = [v, d, mu](double z, double c) { return mu / (mu + (c - v) * z - d * z * z); };
    spec.abscissa = [v, d, mu](double c) {
        double b = c - v;
        double disc = std::sqrt(b * b + 4.0 * d * mu);
        // Smaller-cancellation form of the positive root of d z^2 - b z - mu.
        return b >= 0.0 ? (b + disc) / (2.0 * d) : 2.0 * mu / (disc - b);
    };
    spec.tail_tol = default_tail_tol;
    double s_max = std::log(2.0 / spec.tail_tol) / mu;
    double spread = normal_quantile_upper(0.25 * spec.tail_tol) * std::sqrt(2.0 * d * s_max);
    spec.box = {s_max, -v * s_max - spread, spread};
    spec.tilted_w = [v, d](double s, double z) {
        return std::pair<double, double>{-v * s - 2.0 * d * s * z, std::sqrt(2.0 * d * s)};
    };
    return Kernel::joint(std::move(spec));
}

namespace {

// int K(s, w) e^{-z w} dw at fixed s, including the e^{-z c s} factor in the
// exponent to keep the integrand representable.
double joint_inner(const JointKernelSpec& js, double s, double z, double c, const SupportBox& box,
                   bool clip_to_box)
{
    auto f = [&](double w) {
        double e = js.log_density(s, w) - z * (c * s + w);
        return e < -745.0 ? 0.0 : std::exp(e);
    };
    if (js.tilted_w) {
        auto [m, sd] = js.tilted_w(s, z);
        double lo = m - 12.0 * sd;
        double hi = m + 12.0 * sd;
        if (clip_to_box) {
            lo = std::max(lo, box.w_min);
            hi = std::min(hi, box.w_max);
        }
        if (!(hi > lo))
            return 0.0;
        return numerics::integrate_pieces(f, lo, hi, {m}, 0.0, 1e-9).value;
    }
    if (clip_to_box)
        return numerics::integrate(f, box.w_min, box.w_max, 0.0, 1e-10).value;
    return numerics::integrate_outward(f, box.w_min, box.w_max, -inf, inf, 1e-300, 1e-10).value;
}

double joint_mass(const JointKernelSpec& js, const SupportBox& box, double quad_tol)
{
    auto outer = [&](double s) { return joint_inner(js, s, 0.0, 0.0, box, true); };
    std::vector<double> cuts;
    for (double x = box.s_max; x > 1e-8 * box.s_max; x *= 0.1)
        cuts.push_back(x);
    return numerics::integrate_pieces(outer, 0.0, box.s_max, cuts, 0.1 * quad_tol, 1e-11).value;
}

double joint_transform(const JointKernelSpec& js, double z, double c, double abs_tol)
{
    SupportBox box = js.box;
    auto outer = [&](double s) { return joint_inner(js, s, z, c, box, false); };
    std::vector<double> cuts;
    for (double x = box.s_max; x > 1e-8 * box.s_max; x *= 0.1)
        cuts.push_back(x);
    double core = numerics::integrate_pieces(outer, 0.0, box.s_max, cuts, 0.1 * abs_tol, 1e-11).value;
    // The tilt slows the decay in s; extend until the chunks are negligible.
    double tail = numerics::integrate_outward(outer, box.s_max, 2.0 * box.s_max, box.s_max, inf,
                                              0.1 * abs_tol, 1e-11)
                      .value;
    return core + tail;
}

} // namespace

double kernel_mass(const Kernel& k, double quad_tol, std::optional<SupportBox> box)
{
    SupportBox b = box.value_or(k.support_box());
    if (k.is_separable()) {
        double mt = law_mass_on(k.temporal(), -inf, b.s_max, 0.1 * quad_tol);
        double ms = law_mass_on(k.spatial(), b.w_min, b.w_max, 0.1 * quad_tol);
        return mt * ms;
    }
    return joint_mass(k.joint_spec(), b, quad_tol);
}

double transform(const Kernel& k, double z, double c)
{
    if (!(z >= 0.0))
        throw DomainExceeded("transform: z must be nonnegative");
    double g = k.abscissa(c);
    if (z >= g) {
        std::ostringstream os;
        os << "transform: z = " << z << " is at or beyond the abscissa " << g << " for c = " << c;
        throw DomainExceeded(os.str());
    }
    if (auto v = k.closed_transform(z, c))
        return *v;
    return transform_quadrature(k, z, c);
}

double transform_quadrature(const Kernel& k, double z, double c, double abs_tol)
{
    double g = k.abscissa(c);
    if (!(z >= 0.0) || z > abscissa_margin * g) {
        std::ostringstream os;
        os << "transform quadrature: z = " << z << " outside [0, " << abscissa_margin << " * " << g
           << "] for c = " << c;
        throw DomainExceeded(os.str());
    }
    if (k.is_separable()) {
        double t = tilted_law_integral(k.temporal(), z * c, 0.1 * abs_tol);
        double s = tilted_law_integral(k.spatial(), z, 0.1 * abs_tol);
        return t * s;
    }
    return joint_transform(k.joint_spec(), z, c, abs_tol);
}

} // namespace semiwave::kernels
