#include "semiwave/solver.hpp"

#include "semiwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semiwave::profile {

const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Converged:
        return "converged";
    case SolveStatus::NotConverged:
        return "not_converged";
    case SolveStatus::SandwichBroken:
        return "sandwich_broken";
    }
    return "unknown";
}

SolveResult solve_profile(const WaveProblem& p, const SolveOptions& opt, std::optional<std::vector<double>> initial)
{
    SolveResult r;
    r.warnings = p.warnings;
    r.envelopes = envelopes(p);
    const std::size_t n = p.grid.n;
    const auto& lower = r.envelopes.lower;
    const auto& upper = r.envelopes.upper;
    std::vector<double> cap(n);
    for (std::size_t i = 0; i < n; ++i)
        cap[i] = std::min(upper[i], p.U);

    std::vector<double> phi;
    if (initial) {
        if (initial->size() != n)
            throw InvalidParameter("solve_profile: initial iterate has the wrong size");
        phi = std::move(*initial);
    } else {
        phi = cap;
    }

    std::size_t total = 0;
    std::vector<double> next(n);
    // Lower barrier for the exact branch.
    std::vector<double> lower_polish = lower;
    if (p.admissible) {
        const double eta = std::min(p.m - p.lambda, 0.5 * p.lambda);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = p.grid.t(i);
            lower_polish[i] = t < 0.0 ? -p.delta * std::exp(p.lambda * t) * std::expm1(eta * t) : 0.0;
        }
    }
    auto run_phase = [&](int phase, Branch branch) {
        const auto& lo = phase == 0 ? lower : lower_polish;
        double best = std::numeric_limits<double>::infinity();
        std::size_t since_best = 0;
        bool damped = false;
        while (true) {
            if (total >= opt.max_iter)
                return SolveStatus::NotConverged;
            std::vector<double> a = apply_A(p, phi, branch);
            IterationRecord rec;
            rec.phase = phase;
            rec.damped = damped;
            for (std::size_t i = 0; i < n; ++i) {
                double v = std::max(lo[i] - a[i], a[i] - upper[i]);
                rec.sandwich_violation = std::max(rec.sandwich_violation, v);
                double x = damped ? 0.5 * (phi[i] + a[i]) : a[i];
                double y = std::clamp(x, lo[i], cap[i]);
                if (std::abs(y - x) > opt.clip_tol)
                    ++rec.clip_count;
                rec.sup_change = std::max(rec.sup_change, std::abs(y - phi[i]));
                next[i] = y;
            }
            phi.swap(next);
            ++total;
            r.trace.records.push_back(rec);
            if (phase == 0)
                r.max_sandwich_violation = std::max(r.max_sandwich_violation, rec.sandwich_violation);
            if (phase == 0 && rec.sandwich_violation > 10.0 * opt.quad_tol)
                return SolveStatus::SandwichBroken;
            if (!std::isfinite(rec.sup_change))
                return SolveStatus::NotConverged;
            if (rec.sup_change < opt.tol)
                return SolveStatus::Converged;
            if (rec.sup_change < best) {
                best = rec.sup_change;
                since_best = 0;
            } else if (++since_best >= opt.damping_window && !damped) {
                damped = true;
                std::ostringstream os;
                os << "solve_profile: sup-change stalled for " << opt.damping_window
                   << " iterations in phase " << phase << "; switched to averaged iteration";
                r.warnings.push_back(os.str());
            }
        }
    };

    r.status = run_phase(0, Branch::Regularized);
    r.regularized = phi;
    if (r.status == SolveStatus::Converged && opt.polish)
        r.status = run_phase(1, Branch::Exact);

    Profile& prof = r.profile;
    prof.grid = p.grid;
    prof.values = phi;
    prof.c = p.c;
    prof.iterations = total;
    prof.residual_sup = residual_ode(p, prof);
    prof.tail_rate = tail_rate(p, prof);
    if (r.status == SolveStatus::Converged && !(prof.residual_sup < opt.residual_tol)) {
        std::ostringstream os;
        os << "solve_profile: iteration settled but residual " << prof.residual_sup << " exceeds "
           << opt.residual_tol;
        r.warnings.push_back(os.str());
        r.status = SolveStatus::NotConverged;
    }
    prof.converged = r.status == SolveStatus::Converged;
    if (r.status == SolveStatus::NotConverged)
        r.warnings.push_back("solve_profile: not converged after " + std::to_string(total) + " iterations");
    if (r.status == SolveStatus::SandwichBroken) {
        std::ostringstream os;
        os << "solve_profile: un-clipped iterate left the sandwich by " << r.max_sandwich_violation;
        r.warnings.push_back(os.str());
    }
    return r;
}

SolveResult solve_profile(const WaveProblem& p, double tol, std::size_t max_iter)
{
    SolveOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return solve_profile(p, opt);
}

Profile solve_profile_checked(const WaveProblem& p, const SolveOptions& opt)
{
    SolveResult r = solve_profile(p, opt);
    if (r.status != SolveStatus::Converged) {
        std::ostringstream os;
        os << "solve_profile: " << to_string(r.status) << " after " << r.profile.iterations
           << " iterations (residual " << r.profile.residual_sup << ")";
        throw NotConverged(os.str());
    }
    return r.profile;
}

} // namespace semiwave::profile
