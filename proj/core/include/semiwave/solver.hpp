#pragma once

#include "semiwave/operators.hpp"
#include "semiwave/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace semiwave::profile {

struct SolveOptions {
    double tol = 1e-11;
    std::size_t max_iter = 2000;
    // Sandwich violations above 10 * quad_tol abort the regularised phase.
    double quad_tol = 1e-6;
    // A node counts as clipped when the projection moves it by more than this.
    double clip_tol = 1e-6;
    std::size_t damping_window = 20;
    bool polish = true;
    double residual_tol = 1e-4;
};

enum class SolveStatus { Converged, NotConverged, SandwichBroken };

const char* to_string(SolveStatus s);

struct IterationRecord {
    int phase = 0;  // 0 regularised, 1 polish
    double sup_change = 0.0;
    double sandwich_violation = 0.0;
    std::size_t clip_count = 0;
    bool damped = false;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
};

struct Profile {
    Grid grid;
    std::vector<double> values;
    double c = 0.0;
    double residual_sup = 0.0;
    double tail_rate = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct SolveResult {
    Profile profile;
    IterationTrace trace;
    SolveStatus status = SolveStatus::NotConverged;
    Envelopes envelopes;
    std::vector<double> regularized;  // iterate at the end of the regularised phase
    double max_sandwich_violation = 0.0;
    std::vector<std::string> warnings;
};

SolveResult solve_profile(const WaveProblem& p, const SolveOptions& opt = {},
                          std::optional<std::vector<double>> initial = std::nullopt);
SolveResult solve_profile(const WaveProblem& p, double tol, std::size_t max_iter);
// Throws NotConverged unless the run converged.
Profile solve_profile_checked(const WaveProblem& p, const SolveOptions& opt = {});

// Per-node residual of y'' - c y' - f(y) + (k2 * g(y)); zero at the two end nodes.
std::vector<double> residual_local(const WaveProblem& p, const Profile& prof);
// Sup of residual_local over nodes at least p.margin() away from both ends.
double residual_ode(const WaveProblem& p, const Profile& prof);
// Least-squares slope of log(phi) on the leftmost tenth of the interior.
double tail_rate(const WaveProblem& p, const Profile& prof);

bool persistence_check(const Profile& prof, double xi1, double left_margin = 0.0);

// Translates the profile so that phi(0) = level, by linear interpolation.
Profile normalize_translation(const Profile& prof, double level);
// Linear interpolation with the profile extension policy.
double interpolate(const Profile& prof, double t);
std::vector<double> central_derivative(const Profile& prof);

struct CriticalStep {
    int n = 0;
    double c_n = 0.0;
    std::size_t iterations = 0;
    double residual_sup = 0.0;
    bool converged = false;
    double max_derivative = 0.0;
    bool derivative_bound_ok = false;
    // Sup distance on the window to the previous n (NaN for the first).
    double gap_to_previous = 0.0;
};

struct CriticalResult {
    Profile profile;
    std::vector<CriticalStep> steps;
    double derivative_bound = 0.0;
    double window_lo = -20.0;
    double window_hi = 20.0;
    double kappa = 0.0;
};

struct CriticalOptions {
    int n_max = 16;
    double window_lo = -20.0;
    double window_hi = 20.0;
    ProblemOptions problem{};
    SolveOptions solve{};
};

// Profiles at c_n = (n + 1) c / n for n = 2, 4, 8, ..., n_max, each
// translated so that phi(0) = kappa / 2.
CriticalResult critical_speed_profile(const WaveProblem& at_critical, const CriticalOptions& opt = {});

} // namespace semiwave::profile
