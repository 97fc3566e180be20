#include "model.hpp"

#include <semiwave/errors.hpp>

#include <cmath>

namespace semiwave::cli {

namespace {

double param(const FamilySpec& s, const char* name)
{
    return s.params.at(name);
}

template <class F>
auto at_field(const RunConfig& cfg, const std::string& path, F&& make) -> decltype(make())
{
    try {
        return make();
    } catch (const InvalidParameter& e) {
        throw ConfigError(path, cfg.line_of(path), e.what());
    }
}

} // namespace

kernels::Law1D build_law(const FamilySpec& s)
{
    using kernels::Law1D;
    if (s.kind == "dirac")
        return Law1D::dirac(param(s, "at"));
    if (s.kind == "exponential")
        return Law1D::exponential(param(s, "rate"));
    if (s.kind == "gamma")
        return Law1D::gamma(param(s, "shape"), param(s, "rate"));
    if (s.kind == "gaussian")
        return Law1D::gaussian(param(s, "mean"), param(s, "variance"));
    if (s.kind == "laplace")
        return Law1D::laplace_law(param(s, "mean"), param(s, "scale"));
    if (s.kind == "uniform")
        return Law1D::uniform(param(s, "lo"), param(s, "hi"));
    std::vector<kernels::Atom> atoms;
    for (std::size_t i = 0; i < s.at.size(); ++i)
        atoms.push_back({s.at[i], s.weight[i]});
    return Law1D::atoms(std::move(atoms));
}

profile::FFamily build_f(const FamilySpec& s)
{
    namespace fam = profile::families;
    if (s.kind == "linear")
        return fam::linear_f(param(s, "a"));
    if (s.kind == "quadratic")
        return fam::quadratic_f(param(s, "a"), param(s, "b"));
    return fam::power_f(param(s, "a"), param(s, "k"));
}

profile::GFamily build_g(const FamilySpec& s)
{
    namespace fam = profile::families;
    if (s.kind == "beverton_holt")
        return fam::beverton_holt(param(s, "p"), param(s, "b"));
    if (s.kind == "ricker")
        return fam::ricker(param(s, "p"), param(s, "b"));
    if (s.kind == "mackey_glass")
        return fam::mackey_glass(param(s, "p"), param(s, "k"));
    return fam::linear_g(param(s, "p"));
}

kernels::Kernel build_kernel(const KernelSpec& s)
{
    if (s.kind == "marine")
        return kernels::make_marine_kernel(s.params.at("v"), s.params.at("d"), s.params.at("mu"));
    return kernels::make_separable_kernel(build_law(*s.temporal), build_law(*s.spatial));
}

BuiltModel build_model(const RunConfig& cfg)
{
    const ModelConfig& m = cfg.model;
    auto law = [&](const FamilySpec& s) { return at_field(cfg, s.path, [&] { return build_law(s); }); };
    auto g = at_field(cfg, m.g->path, [&] { return build_g(*m.g); });

    if (m.preset == "marine") {
        double mu_a = m.params.at("mu_a");
        double p = m.params.at("p");
        if (std::abs(g.g_prime0 - p) > 1e-12 * std::abs(p))
            throw ConfigError("model.g", cfg.line_of("model.g"), "g'(0) must equal the marine birth rate p");
        auto k = at_field(cfg, "model", [&] {
            return kernels::make_marine_kernel(m.params.at("v"), m.params.at("d"), m.params.at("mu"));
        });
        auto f = at_field(cfg, "model.mu_a", [&] { return profile::families::linear_f(mu_a); });
        auto nl = at_field(cfg, "model.L", [&] { return profile::make_nonlinearity(f, g, m.L); });
        return {m.preset, k, nl, std::nullopt, std::nullopt};
    }

    auto f = at_field(cfg, m.f->path, [&] { return build_f(*m.f); });
    auto nl = at_field(cfg, "model.L", [&] { return profile::make_nonlinearity(f, g, m.L); });

    if (m.preset == "epidemic") {
        models::EpidemicModel em{m.params.at("alpha"), law(*m.delay), law(*m.dispersal), nl};
        auto red = at_field(cfg, "model", [&] { return models::epidemic_reduction(em); });
        return {m.preset, red.kernel, red.nl, em, std::nullopt};
    }

    auto kernel = at_field(cfg, m.kernel->path, [&] {
        if (m.kernel->temporal)
            law(*m.kernel->temporal);
        if (m.kernel->spatial)
            law(*m.kernel->spatial);
        return build_kernel(*m.kernel);
    });
    if (m.preset == "population") {
        double D = m.params.at("D");
        double gamma = m.params.at("gamma");
        if (!(D > 0.0))
            throw ConfigError("model.D", cfg.line_of("model.D"), "must be positive");
        if (!(gamma > 0.0))
            throw ConfigError("model.gamma", cfg.line_of("model.gamma"), "must be positive");
        models::PopulationModel pm{D, gamma, kernel, nl};
        return {m.preset, kernel, nl, std::nullopt, pm};
    }
    return {m.preset, kernel, nl, std::nullopt, std::nullopt};
}

} // namespace semiwave::cli
