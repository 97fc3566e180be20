#pragma once

#include "semiwave/convolution.hpp"
#include "semiwave/dispersion.hpp"
#include "semiwave/green.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/nonlinearity.hpp"
#include "semiwave/projection.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace semiwave::profile {

struct Grid {
    double t_min = 0.0;
    double h = 1.0;
    std::size_t n = 0;

    double t(std::size_t i) const { return t_min + static_cast<double>(i) * h; }
    double t_max() const { return t(n - 1); }
    // Uniform grid through t = 0 covering [t_lo, t_hi].
    static Grid through_zero(double t_lo, double t_hi, double h);
};

struct GridOverride {
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<double> h;
};

struct ProblemOptions {
    int reg_n = 100;
    std::optional<double> delta;
    std::optional<double> beta;
    GridOverride grid;
    double points_per_efold = 20.0;
    double tail_efolds = 40.0;
    std::size_t max_grid_points = 2'000'000;
    dispersion::RootOptions roots{};
};

struct WaveProblem {
    Nonlinearity nl;
    kernels::Kernel kernel;
    double c = 0.0;
    double beta = 0.0;
    Grid grid;
    int reg_n = 0;
    double delta = 0.0;
    double lambda = 0.0;
    double m = 0.0;
    std::optional<double> lambda2;
    double U = 0.0;
    // False when chi_L has no admissible (lambda, m) at this speed.
    bool admissible = true;
    std::vector<std::string> warnings;

    kernels::ExponentialGreen k1;
    Regularized reg;
    std::shared_ptr<const numerics::SampledKernel> k2;
    double k2_radius = 0.0;
    double k1_radius = 0.0;

    double margin() const { return k2_radius + k1_radius; }
};

dispersion::DispersionFunction chi_zero(const Nonlinearity& nl, const kernels::Kernel& k);
dispersion::DispersionFunction chi_L(const Nonlinearity& nl, const kernels::Kernel& k);

// Builds beta, the Green kernel, lambda, m, delta, the default grid and the
// sampled k2 weights. A speed without admissible (lambda, m) still yields a
// problem, with admissible = false and a warning.
WaveProblem make_problem(const Nonlinearity& nl, const kernels::Kernel& k, double c,
                         const ProblemOptions& opt = {});

} // namespace semiwave::profile
