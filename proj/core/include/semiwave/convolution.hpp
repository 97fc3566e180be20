#pragma once

#include "semiwave/green.hpp"
#include "semiwave/projection.hpp"

#include <span>
#include <vector>

namespace semiwave::numerics {

enum class Extension { Zero, Hold };

struct ExtensionPolicy {
    Extension left = Extension::Zero;
    Extension right = Extension::Hold;
};

// Product-integration weights of a kernel against the piecewise-linear
// interpolant on a uniform grid: w[k] multiplies v(t_i - (m_lo + k) h).
struct SampledKernel {
    double h = 0.0;
    long m_lo = 0;
    std::vector<double> w;
    // Mass beyond the stored offsets, applied to the held boundary values.
    double mass_below = 0.0;  // r < m_lo h, reaches to the right of the grid
    double mass_above = 0.0;  // r > m_hi h, reaches to the left of the grid
    // Raw quadrature sum minus the nominal mass, before renormalisation.
    double defect = 0.0;
    long m_hi() const { return m_lo + static_cast<long>(w.size()) - 1; }
    double total() const;
};

// Samples a projected kernel. Offsets are restricted to |m| <= max_offset;
// the remaining mass is lumped. Weights are rescaled so that the total is
// `nominal_mass`.
SampledKernel sample_projection(const kernels::ProjectedKernel& k2, double h, long max_offset,
                                double nominal_mass = 1.0);

// Hat weights of the exponential Green kernel for offsets in [-max_offset, max_offset].
SampledKernel sample_green(const kernels::ExponentialGreen& k1, double h, long max_offset);

// out_i = sum_j w[i - j] v_j with v extended outside the grid per `policy`.
void convolve(const SampledKernel& k, std::span<const double> v, ExtensionPolicy policy,
              std::span<double> out);

// Same as convolve(sample_green(k1, h, inf), ...) in O(N) by two exponential recursions.
void convolve_green(const kernels::ExponentialGreen& k1, double h, std::span<const double> v,
                    ExtensionPolicy policy, std::span<double> out);

} // namespace semiwave::numerics
