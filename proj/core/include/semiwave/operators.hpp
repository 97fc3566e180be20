#pragma once

#include "semiwave/problem.hpp"

#include <span>
#include <vector>

namespace semiwave::profile {

inline constexpr numerics::ExtensionPolicy profile_extension{numerics::Extension::Zero,
                                                             numerics::Extension::Hold};

double k1_eval(double s, double c, double beta);

struct Envelopes {
    std::vector<double> lower;
    std::vector<double> upper;
};

// phi- and phi+ on the grid; throws NoAdmissibleM when the problem has no m.
Envelopes sub_super(const WaveProblem& p);
// As sub_super, but with phi- = 0 when no m is available.
Envelopes envelopes(const WaveProblem& p);

enum class Branch { Exact, Regularized };

// k2 * v with the profile extension policy.
std::vector<double> convolve_k2(const WaveProblem& p, std::span<const double> v);
// k1 * v with the profile extension policy.
std::vector<double> convolve_k1(const WaveProblem& p, std::span<const double> v);

std::vector<double> apply_G(const WaveProblem& p, std::span<const double> phi, Branch b = Branch::Exact);
std::vector<double> apply_A(const WaveProblem& p, std::span<const double> phi, Branch b = Branch::Exact);
// Linear operator with g replaced by L s and f_beta by (beta - inf f') s.
std::vector<double> apply_L(const WaveProblem& p, std::span<const double> phi);

} // namespace semiwave::profile
