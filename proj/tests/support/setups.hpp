#pragma once

#include "semiwave/kernel.hpp"
#include "semiwave/models.hpp"
#include "semiwave/nonlinearity.hpp"

namespace semiwave::fixtures {

struct MarineParams {
    double v = 0.02;
    double d = 100.0;
    double mu = 0.001;
    double mu_a = 0.05;
    double p = 2.0;
};

// f(s) = s, g(s) = 2 s / (1 + s).
profile::Nonlinearity benchmark_nl();
// Exp(1) delay, centred Gaussian dispersal with unit variance.
kernels::Kernel benchmark_kernel();
// No delay, no dispersal.
kernels::Kernel delta_kernel();

models::EpidemicModel epidemic_preset();
models::PopulationModel population_preset();

} // namespace semiwave::fixtures
