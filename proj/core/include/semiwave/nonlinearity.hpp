#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace semiwave::profile {

// Birth term g.
struct GFamily {
    std::string name;
    std::function<double(double)> g;
    double g_prime0 = 0.0;
    double lipschitz_majorant = 0.0;  // smallest L with g(s) <= L s
    double g_sup = 0.0;
};

// Removal term f.
struct FFamily {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    std::function<double(double)> f_inverse;  // empty: numeric inversion
    double f_prime0 = 0.0;
    double f_inf_slope = 0.0;
};

namespace families {
GFamily beverton_holt(double p, double b = 1.0);   // p s / (1 + b s)
GFamily ricker(double p, double b = 1.0);          // p s e^{-b s}
GFamily mackey_glass(double p, double k);          // p s / (1 + s^k)
GFamily linear_g(double p);                        // p s
FFamily linear_f(double a);                        // a s
FFamily quadratic_f(double a, double b);           // a s + b s^2
FFamily power_f(double a, double k);               // a s^k
} // namespace families

struct Nonlinearity {
    std::function<double(double)> g;
    double g_prime0 = 0.0;
    double L = 0.0;
    double g_sup = 0.0;
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    double f_prime0 = 0.0;
    double f_inf_slope = 0.0;
    std::function<double(double)> f_inverse;
    std::string description;

    // A-priori bound U = sup g / inf f'.
    double bound() const;
};

// L defaults to the family's smallest linear majorant.
Nonlinearity make_nonlinearity(const FFamily& f, const GFamily& g, std::optional<double> L = std::nullopt);

struct ConditionResult {
    std::string name;
    bool pass = true;
    std::optional<double> first_violation;
    std::string detail;
};

struct HypothesisReport {
    std::vector<ConditionResult> conditions;
    bool all_pass() const;
    const ConditionResult& get(const std::string& name) const;
};

HypothesisReport validate_hypotheses(const Nonlinearity& nl, std::size_t samples = 2000);

double select_beta(const Nonlinearity& nl);

struct Regularized {
    std::function<double(double)> g_n;
    std::function<double(double)> f_beta_n;
    double threshold = 0.0;
};

Regularized regularize(const Nonlinearity& nl, double beta, int n);

struct FixedPoint {
    double kappa = 0.0;
    bool attracting = false;
};

struct FixedPointReport {
    std::vector<FixedPoint> points;
    double G_prime0 = 0.0;
};

FixedPointReport fixed_points_of_fg(const Nonlinearity& nl);

} // namespace semiwave::profile
