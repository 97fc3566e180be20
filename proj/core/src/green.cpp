#include "semiwave/green.hpp"

#include "semiwave/errors.hpp"

#include <cmath>

namespace semiwave::kernels {

ExponentialGreen ExponentialGreen::for_profile(double c, double beta)
{
    return for_diffusion(1.0, c, beta);
}

ExponentialGreen ExponentialGreen::for_diffusion(double D, double c, double gamma)
{
    if (!(D > 0.0) || !(gamma > 0.0) || !std::isfinite(c))
        throw InvalidParameter("exponential Green kernel: need D > 0, gamma > 0, finite c");
    double sigma = std::sqrt(c * c + 4.0 * D * gamma);
    // Roots of D z^2 - c z - gamma computed without cancellation.
    double nu;
    double mu;
    if (c >= 0.0) {
        mu = (c + sigma) / (2.0 * D);
        nu = -gamma / (D * mu);
    } else {
        nu = (c - sigma) / (2.0 * D);
        mu = -gamma / (D * nu);
    }
    return ExponentialGreen(nu, mu, sigma);
}

double ExponentialGreen::operator()(double s) const
{
    return (s >= 0.0 ? std::exp(nu_ * s) : std::exp(mu_ * s)) / norm_;
}

double ExponentialGreen::mass() const { return (1.0 / -nu_ + 1.0 / mu_) / norm_; }

double ExponentialGreen::laplace(double z) const
{
    if (!(z > nu_ && z < mu_))
        throw DomainExceeded("exponential Green kernel: Laplace argument outside (nu, mu)");
    return (1.0 / (z - nu_) + 1.0 / (mu_ - z)) / norm_;
}

} // namespace semiwave::kernels
