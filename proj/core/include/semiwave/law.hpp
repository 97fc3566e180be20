#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace semiwave::kernels {

struct Atom {
    double at = 0.0;
    double weight = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// A unit-mass law on the real line made of finitely many atoms plus an
// optional density part. Dirac components stay symbolic.
class Law1D {
public:
    struct DensitySpec {
        std::string name;
        std::function<double(double)> pdf;
        // Laplace transform theta -> int e^{-theta x} pdf(x) dx, if known.
        std::function<double(double)> laplace;
        // Open interval of theta where the Laplace integral converges.
        Interval laplace_domain{-std::numeric_limits<double>::infinity(),
                                std::numeric_limits<double>::infinity()};
        // Support truncated so that the omitted mass is below tail_tol.
        std::function<Interval(double tail_tol)> support;
        // Points where pdf or its derivative jumps.
        std::vector<double> breakpoints;
        // Location and width hints for quadrature splitting.
        double center = 0.0;
        double scale = 1.0;
        double mass = 1.0;
    };

    static Law1D dirac(double at = 0.0);
    static Law1D atoms(std::vector<Atom> atoms);
    static Law1D exponential(double rate);
    static Law1D gamma(double shape, double rate);
    static Law1D gaussian(double mean, double variance);
    static Law1D laplace_law(double mean, double scale);
    static Law1D uniform(double lo, double hi);
    static Law1D from_density(DensitySpec spec);

    // Law of X + Y for X ~ this law and Y ~ Exp(rate) independent.
    Law1D with_exponential_delay(double rate) const;

    const std::vector<Atom>& atom_list() const;
    bool has_density() const;
    double pdf(double x) const;
    double mass() const;
    std::optional<double> laplace(double theta) const;
    Interval laplace_domain() const;
    Interval support(double tail_tol) const;
    std::vector<double> breakpoints() const;
    double center() const;
    double scale() const;
    bool nonnegative_support(double tail_tol = 1e-12) const;
    const std::string& name() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit Law1D(std::shared_ptr<const Impl> impl);
};

} // namespace semiwave::kernels
