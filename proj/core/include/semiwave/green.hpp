#pragma once

namespace semiwave::kernels {

// Two-sided exponential kernel k(s) = e^{nu s}/norm for s >= 0 and
// e^{mu s}/norm for s < 0, with nu < 0 < mu the roots of a z^2 - c z - b = 0.
class ExponentialGreen {
public:
    // Green's kernel of -y'' + c y' + beta y.
    static ExponentialGreen for_profile(double c, double beta);
    // Green's kernel of -D y'' + c y' + gamma y.
    static ExponentialGreen for_diffusion(double D, double c, double gamma);

    double operator()(double s) const;
    double nu() const { return nu_; }
    double mu() const { return mu_; }
    double norm() const { return norm_; }
    double mass() const;
    // int k(s) e^{-z s} ds for nu < z < mu.
    double laplace(double z) const;

private:
    ExponentialGreen(double nu, double mu, double norm) : nu_(nu), mu_(mu), norm_(norm) {}
    double nu_;
    double mu_;
    double norm_;
};

} // namespace semiwave::kernels
