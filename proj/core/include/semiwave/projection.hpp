#pragma once

#include "semiwave/kernel.hpp"

#include <functional>
#include <vector>

namespace semiwave::kernels {

// The kernel projected on the co-moving delay r = c s + w, split into a
// Dirac part and a density part.
struct ProjectedKernel {
    double c = 0.0;
    std::vector<Atom> atoms;
    std::function<double(double)> density;  // empty when there is none
    Interval support{0.0, 0.0};             // of the density part
    std::vector<double> breakpoints;
    double atom_mass = 0.0;
};

ProjectedKernel projection(const Kernel& k, double c);

} // namespace semiwave::kernels
