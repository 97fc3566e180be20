#pragma once

#include "semiwave/dispersion.hpp"
#include "semiwave/kernel.hpp"
#include "semiwave/law.hpp"
#include "semiwave/nonlinearity.hpp"
#include "semiwave/solver.hpp"

#include <optional>
#include <vector>

namespace semiwave::models {

struct EpidemicModel {
    double alpha = 1.0;
    kernels::Law1D delay;      // P on [0, inf)
    kernels::Law1D dispersal;  // J on the line
    profile::Nonlinearity nl;
};

// The scalar problem for the agent density: kernel built from the delay law
// convolved with Exp(alpha) and the dispersal law, and g scaled by 1/alpha.
struct EpidemicReduction {
    kernels::Kernel kernel;
    profile::Nonlinearity nl;
};

EpidemicReduction epidemic_reduction(const EpidemicModel& m);

struct DispersionPair {
    dispersion::DispersionFunction chi0;
    dispersion::DispersionFunction chiL;
};

DispersionPair epidemic_dispersion(const EpidemicModel& m);

// int_0^inf K2(w) dw with K2(w) = int_0^w e^{-alpha (w - r)} P(dr), by quadrature.
double epidemic_k2_mass(const EpidemicModel& m, double quad_tol = 1e-10);

// psi(t) = int_0^inf g(phi(t - c w)) K2(w) dw; psi = g(phi)/alpha when c == 0.
std::vector<double> epidemic_reconstruct(const EpidemicModel& m, const profile::Profile& prof, double c);

struct PopulationModel {
    double D = 1.0;
    double gamma = 1.0;
    kernels::Kernel kernel;
    profile::Nonlinearity nl;
};

// (H phi)(t) = g(phi(t)) - int k2(r) g(phi(t - r)) dr.
std::vector<double> population_H(const PopulationModel& m, const profile::Profile& prof, double c);
std::vector<double> population_reconstruct(const PopulationModel& m, const profile::Profile& prof, double c);
DispersionPair population_dispersion(const PopulationModel& m);

struct MarinePreset {
    kernels::Kernel kernel;
    profile::Nonlinearity nl;
    dispersion::DispersionFunction chi;
    dispersion::DispersionFunction chiL;
};

// f(s) = mu_a s and g defaulting to p s / (1 + s).
MarinePreset marine_preset(double v_j, double d_j, double mu_j, double mu_a, double p,
                           std::optional<profile::GFamily> g = std::nullopt, std::optional<double> L = std::nullopt);

} // namespace semiwave::models
