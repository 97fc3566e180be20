#pragma once

#include "semiwave/kernel.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace semiwave::dispersion {

// R(z, c) = z^2 - c z - q + p M(z, c).
struct DispersionFunction {
    double q = 0.0;
    double p = 0.0;
    kernels::Kernel kernel;

    DispersionFunction(double q, double p, kernels::Kernel kernel);
};

struct RootOptions {
    double root_tol = 1e-9;
    double double_tol = 1e-6;
    int scan_points = 256;
    double tie_gap = 1e-4;
};

struct RootReport {
    double c = 0.0;
    std::vector<double> roots;
    bool is_double = false;
    double bound_mu_q = 0.0;
    // Scanned interval (0, z_hi) and the minimum of R found on it.
    double z_hi = 0.0;
    double z_min = 0.0;
    double r_min = 0.0;
};

struct SpeedOptions {
    double speed_tol = 1e-9;
    double c_cap = 1e6;
    RootOptions roots{};
};

struct SpeedResult {
    double c_min = 0.0;
    double lambda_tangent = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    long evaluations = 0;
    bool cap_hit = false;
    std::vector<std::string> warnings;
};

struct MinimumReport {
    double z = 0.0;
    double value = 0.0;
    double z_hi = 0.0;
};

double eval_R(const DispersionFunction& d, double z, double c);
double mu_q(double c, double q);

// Right end of the usable scan interval: min(0.99 delta(c), mu_q(c, q)).
double scan_limit(const DispersionFunction& d, double c);

// Minimum of R(., c) over the scan interval.
MinimumReport minimize_R(const DispersionFunction& d, double c, const RootOptions& opt = {});

RootReport positive_roots(const DispersionFunction& d, double c, const RootOptions& opt = {});

SpeedResult minimal_speed(const DispersionFunction& d,
                          std::optional<std::pair<double, double>> c_bracket = std::nullopt,
                          const SpeedOptions& opt = {});

struct IdentityCheck {
    double max_abs_error = 0.0;
    double chi0_integral = 0.0;
    double chi0_quotient = 0.0;
    double chi0_expected = 0.0;
};

// chi(z) = 1 - (beta - q)/(beta + c z - z^2) - p M/(beta + c z - z^2) against
// -R(z, c)/(beta + c z - z^2); also evaluates both forms at z = 0.
IdentityCheck chi_identity_check(const DispersionFunction& d, double beta, double c,
                                 const std::vector<double>& z_grid);

} // namespace semiwave::dispersion
