#pragma once

#include <functional>
#include <vector>

namespace semiwave::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// Adaptive 21-point Gauss-Kronrod on a finite interval. Throws QuadratureFailure
// when the estimated error exceeds max(abs_tol, rel_tol * L1) by more than
// a factor of 100.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol = 1e-12);

// Integrates over [a, b] split at every interior point of `cuts`.
QuadratureResult integrate_pieces(const std::function<double(double)>& f, double a, double b,
                                  std::vector<double> cuts, double abs_tol, double rel_tol = 1e-12);

// Integrates outward from [a, b] in both directions with doubling chunks
// until a chunk contributes less than abs_tol. `left_limit` / `right_limit`
// bound the extension (use +-infinity for none).
QuadratureResult integrate_outward(const std::function<double(double)>& f, double a, double b,
                                   double left_limit, double right_limit, double abs_tol,
                                   double rel_tol = 1e-12);

// Fixed 10-point Gauss-Legendre.
double gauss10(const std::function<double(double)>& f, double a, double b);

} // namespace semiwave::numerics
