#include "commands.hpp"

#include "model.hpp"
#include "output.hpp"

#include <semiwave/errors.hpp>
#include <semiwave/solver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace semiwave::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
public:
    double lap()
    {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }
    double total() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    std::chrono::steady_clock::time_point last_ = start_;
};

json number(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

// "op: message" strings from the library keep their operation name.
Warning split_warning(const std::string& fallback_op, const std::string& text)
{
    auto pos = text.find(": ");
    if (pos != std::string::npos && pos > 0 && text.substr(0, pos).find(' ') == std::string::npos)
        return {text.substr(0, pos), text.substr(pos + 2)};
    return {fallback_op, text};
}

struct Session {
    const RunConfig& cfg;
    const RunOptions& opt;
    RunReport rep;
    Stopwatch clock;
    fs::path out_dir;
    std::vector<std::string> formats;

    Session(const RunConfig& c, const RunOptions& o, const char* command) : cfg(c), opt(o)
    {
        rep.command = command;
        rep.config = cfg.echo();
        rep.config_hash = cfg.hash();
        out_dir = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.output.dir);
        formats = opt.formats ? *opt.formats : cfg.output.formats;
        if (opt.seedless)
            rep.outputs["seedless"] = true;
    }

    bool wants(const std::string& f) const { return std::find(formats.begin(), formats.end(), f) != formats.end(); }

    void log(const std::string& line) const
    {
        if (opt.verbose && opt.log)
            *opt.log << "[" << rep.command << "] " << line << '\n';
    }

    void time(const std::string& stage) { rep.timings[stage] = clock.lap(); }

    void write(const std::string& name, const std::string& content)
    {
        fs::path p = out_dir / name;
        write_atomic(p, content);
        rep.files.push_back(p.string());
        log("wrote " + p.string());
    }

    void finish() { rep.timings["total"] = clock.total(); }
};

json condition_row(const std::string& name, bool pass, std::optional<double> at, const std::string& detail)
{
    json row{{"condition", name}, {"pass", pass}, {"detail", detail}};
    row["first_violation"] = at ? json(*at) : json(nullptr);
    return row;
}

// Fills the hypothesis table; true when every condition holds.
bool check_hypotheses(Session& s, const BuiltModel& m)
{
    bool ok = true;
    auto add = [&](json row) {
        ok = ok && row["pass"].get<bool>();
        s.rep.hypotheses.push_back(std::move(row));
    };

    double mass = kernels::kernel_mass(m.kernel);
    {
        std::ostringstream os;
        os << "kernel mass " << std::setprecision(12) << mass;
        add(condition_row("H0.mass", std::abs(mass - 1.0) < 1e-6, std::nullopt, os.str()));
    }
    if (m.kernel.is_separable()) {
        bool nonneg = m.kernel.temporal().nonnegative_support();
        add(condition_row("H0.delay", nonneg, std::nullopt,
                          nonneg ? "temporal law lives on [0, inf)" : "temporal law charges negative delays"));
    }
    if (m.epidemic) {
        double k2 = models::epidemic_k2_mass(*m.epidemic);
        double expected = 1.0 / m.epidemic->alpha;
        std::ostringstream os;
        os << "int K2 = " << std::setprecision(12) << k2 << ", 1/alpha = " << expected;
        add(condition_row("K2.mass", std::abs(k2 - expected) < 1e-6, std::nullopt, os.str()));
    }
    for (const auto& c : profile::validate_hypotheses(m.nl).conditions)
        add(condition_row(c.name, c.pass, c.first_violation, c.detail));

    s.rep.quantities["g_prime0"] = m.nl.g_prime0;
    s.rep.quantities["f_prime0"] = m.nl.f_prime0;
    s.rep.quantities["L"] = m.nl.L;
    s.rep.quantities["inf_f_prime"] = m.nl.f_inf_slope;
    s.rep.quantities["sup_g"] = number(m.nl.g_sup);
    s.rep.quantities["U"] = number(m.nl.bound());
    s.time("validate");
    return ok;
}

std::optional<BuiltModel> prepare(Session& s)
{
    BuiltModel m = build_model(s.cfg);
    s.rep.outputs["model"] = m.nl.description;
    s.time("build");
    if (!check_hypotheses(s, m)) {
        s.rep.warn(s.rep.command, "model hypotheses fail; see the hypothesis table");
        s.rep.exit_code = exit_validation;
        return std::nullopt;
    }
    try {
        s.rep.quantities["beta"] = profile::select_beta(m.nl);
    } catch (const Error& e) {
        s.rep.warn("select_beta", e.what());
    }
    return m;
}

dispersion::SpeedOptions speed_options(const RunConfig& cfg)
{
    dispersion::SpeedOptions o;
    o.speed_tol = cfg.minspeed.speed_tol;
    o.c_cap = cfg.minspeed.c_cap;
    return o;
}

struct Speeds {
    dispersion::SpeedResult chi0;
    dispersion::SpeedResult chiL;
};

// c_* and c_star from chi_0 and chi_L, recorded in the report.
Speeds minimal_speeds(Session& s, const BuiltModel& m)
{
    auto d0 = profile::chi_zero(m.nl, m.kernel);
    auto dL = profile::chi_L(m.nl, m.kernel);
    auto o = speed_options(s.cfg);
    auto solve = [&](const dispersion::DispersionFunction& d, const char* which) {
        try {
            return dispersion::minimal_speed(d, s.cfg.minspeed.bracket, o);
        } catch (const BadBracket& e) {
            throw BadBracket(std::string(e.what()) + " [" + which +
                             "]; give minspeed.bracket explicitly or raise minspeed.c_cap");
        }
    };
    Speeds sp{solve(d0, "chi0"), solve(dL, "chiL")};
    for (const auto* r : {&sp.chi0, &sp.chiL}) {
        for (const auto& w : r->warnings)
            s.rep.warn("minimal_speed", w);
        if (r->cap_hit)
            s.rep.warn("minimal_speed", "bracket growth hit the cap c = " + format_number(o.c_cap));
    }
    s.rep.quantities["c_star_chi0"] = sp.chi0.c_min;
    s.rep.quantities["lambda_tangent_chi0"] = sp.chi0.lambda_tangent;
    s.rep.quantities["c_star_chiL"] = sp.chiL.c_min;
    s.rep.quantities["lambda_tangent_chiL"] = sp.chiL.lambda_tangent;
    s.time("minspeed");
    return sp;
}

profile::ProblemOptions problem_options(const ProfileConfig& p)
{
    profile::ProblemOptions o;
    o.reg_n = p.reg_n;
    o.grid.t_min = p.t_min;
    o.grid.t_max = p.t_max;
    o.grid.h = p.h;
    o.points_per_efold = p.points_per_efold;
    return o;
}

profile::SolveOptions solve_options(const ProfileConfig& p)
{
    profile::SolveOptions o;
    o.tol = p.tol;
    o.max_iter = p.max_iter;
    o.residual_tol = p.residual_tol;
    return o;
}

template <class Body>
RunReport guarded(Session& s, Body&& body)
{
    try {
        body();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidParameter& e) {
        s.rep.warn(s.rep.command, e.what());
        s.rep.exit_code = exit_validation;
    } catch (const Error& e) {
        s.rep.warn(s.rep.command, e.what());
        s.rep.exit_code = exit_numeric;
    }
    s.finish();
    return std::move(s.rep);
}

std::string speed_tag(double c)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", c);
    return buf;
}

} // namespace

void RunReport::warn(std::string operation, std::string message)
{
    warnings.push_back({std::move(operation), std::move(message)});
}

json RunReport::to_json() const
{
    json j;
    j["version"] = version_string;
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = config_hash;
    j["hypotheses"] = hypotheses;
    j["quantities"] = quantities;
    j["outputs"] = outputs;
    j["timings_s"] = timings;
    j["warnings"] = json::array();
    for (const auto& w : warnings)
        j["warnings"].push_back({{"operation", w.operation}, {"message", w.message}});
    j["files"] = files;
    j["exit_code"] = exit_code;
    return j;
}

RunReport cmd_validate(const RunConfig& cfg, const RunOptions& opt)
{
    Session s(cfg, opt, "validate");
    return guarded(s, [&] { prepare(s); });
}

RunReport cmd_dispersion(const RunConfig& cfg, const RunOptions& opt)
{
    if (cfg.dispersion.c.empty())
        throw ConfigError("dispersion.c", cfg.line_of("dispersion"), "missing (one or more speeds)");
    Session s(cfg, opt, "dispersion");
    return guarded(s, [&] {
        auto m = prepare(s);
        if (!m)
            return;
        auto d0 = profile::chi_zero(m->nl, m->kernel);
        std::optional<dispersion::DispersionFunction> dL;
        try {
            dL = profile::chi_L(m->nl, m->kernel);
        } catch (const InvalidParameter& e) {
            s.rep.warn("chi_L", e.what());
        }
        bool same = dL && dL->q == d0.q && dL->p == d0.p;

        std::vector<Series> series;
        json curves = json::array();
        long omitted_total = 0;
        for (std::size_t k = 0; k < cfg.dispersion.c.size(); ++k) {
            double c = cfg.dispersion.c[k];
            double z_hi = cfg.dispersion.z_max.value_or(dispersion::scan_limit(d0, c));
            double z_lo = cfg.dispersion.z_min;
            json curve{{"c", c}, {"z_min", z_lo}, {"z_max", z_hi}};
            if (!(z_hi > z_lo)) {
                s.rep.warn("cmd_dispersion", "empty z range at c = " + format_number(c));
                curve["rows"] = 0;
                curves.push_back(curve);
                continue;
            }
            CsvTable table({"z", "chi0", "chiL"}, s.rep.config_hash);
            Series s0{"chi0, c = " + speed_tag(c), {}, {}};
            Series sL{"chiL, c = " + speed_tag(c), {}, {}};
            long omitted = 0;
            long rows = 0;
            const int n = cfg.dispersion.points;
            for (int i = 0; i < n; ++i) {
                double z = z_lo + (z_hi - z_lo) * i / (n - 1);
                try {
                    double r0 = dispersion::eval_R(d0, z, c);
                    double rL = dL ? dispersion::eval_R(*dL, z, c) : nan;
                    table.add_row({z, r0, rL});
                    s0.x.push_back(z);
                    s0.y.push_back(r0);
                    sL.x.push_back(z);
                    sL.y.push_back(rL);
                    ++rows;
                } catch (const DomainExceeded&) {
                    ++omitted;
                }
            }
            omitted_total += omitted;
            curve["rows"] = rows;
            curve["omitted_domain_exceeded"] = omitted;

            auto roots = dispersion::positive_roots(d0, c);
            curve["chi0_roots"] = roots.roots;
            curve["chi0_double_root"] = roots.is_double;
            curve["chi0_min"] = roots.r_min;
            curve["chi0_argmin"] = roots.z_min;
            if (roots.roots.empty())
                curve["note"] = "no positive root of chi0 for this c";
            curves.push_back(curve);

            if (s.wants("csv"))
                s.write("dispersion_c" + speed_tag(c) + ".csv", table.str());
            series.push_back(std::move(s0));
            if (dL && !same)
                series.push_back(std::move(sL));
        }
        s.rep.outputs["curves"] = curves;
        if (omitted_total > 0)
            s.rep.warn("cmd_dispersion",
                       std::to_string(omitted_total) + " rows beyond the transform abscissa were omitted");
        s.time("dispersion");
        if (s.wants("svg"))
            s.write("dispersion.svg", svg_line_chart({"Characteristic function", "z", "R(z, c)", true}, series));
    });
}

RunReport cmd_minspeed(const RunConfig& cfg, const RunOptions& opt)
{
    Session s(cfg, opt, "minspeed");
    return guarded(s, [&] {
        auto m = prepare(s);
        if (!m)
            return;
        Speeds sp = minimal_speeds(s, *m);
        double tol = 10.0 * cfg.minspeed.speed_tol * std::max(1.0, std::abs(sp.chi0.c_min));
        bool ordered = sp.chiL.c_min >= sp.chi0.c_min - tol;
        bool strict = sp.chiL.c_min > sp.chi0.c_min + tol;
        bool equal_expected = m->nl.L == m->nl.g_prime0 && m->nl.f_inf_slope == m->nl.f_prime0;
        s.rep.outputs["ordering_holds"] = ordered;
        s.rep.outputs["strict"] = strict;
        s.rep.outputs["equality_expected"] = equal_expected;
        s.rep.outputs["bracket_chi0"] = {sp.chi0.bracket.first, sp.chi0.bracket.second};
        s.rep.outputs["bracket_chiL"] = {sp.chiL.bracket.first, sp.chiL.bracket.second};
        if (!ordered)
            s.rep.warn("cmd_minspeed", "c_star from chi_L is below c_* from chi_0");
        if (equal_expected && std::abs(sp.chiL.c_min - sp.chi0.c_min) > 1e-3)
            s.rep.warn("cmd_minspeed", "the two speeds should coincide for this model but differ by more than 1e-3");
        if (s.wants("csv")) {
            CsvTable t({"c_star_chi0", "lambda_chi0", "c_star_chiL", "lambda_chiL"}, s.rep.config_hash);
            t.add_row({sp.chi0.c_min, sp.chi0.lambda_tangent, sp.chiL.c_min, sp.chiL.lambda_tangent});
            s.write("minspeed.csv", t.str());
        }
    });
}

RunReport cmd_profile(const RunConfig& cfg, const RunOptions& opt)
{
    Session s(cfg, opt, "profile");
    return guarded(s, [&] {
        auto m = prepare(s);
        if (!m)
            return;
        const ProfileConfig& pc = cfg.profile;
        Speeds sp = minimal_speeds(s, *m);
        const double c_crit = sp.chiL.c_min;
        double c = pc.c ? *pc.c : pc.c_factor ? *pc.c_factor * c_crit : pc.critical ? c_crit : 1.5 * c_crit;
        bool critical = pc.critical || (pc.c_factor && *pc.c_factor == 1.0) ||
                        std::abs(c - c_crit) <= 10.0 * cfg.minspeed.speed_tol * std::max(1.0, std::abs(c_crit));
        s.rep.quantities["c"] = c;
        s.rep.outputs["critical_path"] = critical;
        if (c < c_crit && !critical)
            s.rep.warn("cmd_profile", "c = " + format_number(c) + " is below c_star = " + format_number(c_crit) +
                                          "; proceeding, expect failure");
        s.log("solving at c = " + format_number(c));

        auto popts = problem_options(pc);
        auto sopts = solve_options(pc);
        profile::WaveProblem p = profile::make_problem(m->nl, m->kernel, critical ? c_crit : c, popts);
        for (const auto& w : p.warnings)
            s.rep.warnings.push_back(split_warning("make_problem", w));
        s.rep.quantities["beta"] = p.beta;
        s.rep.quantities["lambda"] = number(p.lambda);
        s.rep.quantities["m"] = number(p.m);
        s.rep.quantities["delta"] = p.delta;
        s.rep.quantities["grid"] = {{"t_min", p.grid.t_min}, {"t_max", p.grid.t_max()}, {"h", p.grid.h},
                                    {"n", p.grid.n}};
        s.time("problem");

        profile::Profile prof;
        std::optional<profile::SolveResult> run;
        std::optional<profile::CriticalResult> crit;
        bool converged = false;
        if (critical) {
            profile::CriticalOptions co;
            co.n_max = pc.n_max;
            co.window_lo = pc.window_lo;
            co.window_hi = pc.window_hi;
            co.problem = popts;
            co.solve = sopts;
            crit = profile::critical_speed_profile(p, co);
            prof = crit->profile;
            converged = std::all_of(crit->steps.begin(), crit->steps.end(), [](const auto& st) { return st.converged; });
            json steps = json::array();
            for (const auto& st : crit->steps) {
                steps.push_back({{"n", st.n},
                                 {"c_n", st.c_n},
                                 {"iterations", st.iterations},
                                 {"residual", st.residual_sup},
                                 {"converged", st.converged},
                                 {"max_derivative", st.max_derivative},
                                 {"derivative_bound_ok", st.derivative_bound_ok},
                                 {"gap_to_previous", number(st.gap_to_previous)}});
                if (!st.derivative_bound_ok)
                    s.rep.warn("critical_speed_profile", "derivative bound violated at n = " + std::to_string(st.n));
            }
            s.rep.outputs["critical_steps"] = steps;
            s.rep.outputs["derivative_bound"] = crit->derivative_bound;
            s.rep.outputs["window"] = {crit->window_lo, crit->window_hi};
        } else {
            run = profile::solve_profile(p, sopts);
            prof = run->profile;
            converged = run->status == profile::SolveStatus::Converged;
            // The first entries repeat the problem warnings already recorded.
            for (std::size_t i = p.warnings.size(); i < run->warnings.size(); ++i)
                s.rep.warnings.push_back(split_warning("solve_profile", run->warnings[i]));
            s.rep.outputs["status"] = profile::to_string(run->status);
            s.rep.outputs["max_sandwich_violation"] = run->max_sandwich_violation;
            const auto& rec = run->trace.records;
            if (!rec.empty() && rec.back().clip_count > 0)
                s.rep.warn("solve_profile", "clipping still active at the last iteration (" +
                                                std::to_string(rec.back().clip_count) + " nodes)");
        }
        s.time("solve");

        s.rep.outputs["converged"] = converged;
        s.rep.outputs["iterations"] = prof.iterations;
        s.rep.outputs["residual_ode"] = prof.residual_sup;
        s.rep.outputs["tail_rate"] = number(prof.tail_rate);
        if (std::isfinite(p.lambda) && p.lambda > 0.0 && !critical)
            s.rep.outputs["tail_rate_rel_error"] = number(std::abs(prof.tail_rate - p.lambda) / p.lambda);
        double vmax = prof.values.empty() ? 0.0 : *std::max_element(prof.values.begin(), prof.values.end());
        s.rep.outputs["max_phi"] = vmax;
        s.rep.outputs["bound_holds"] = !(vmax > m->nl.bound() + 1e-6);
        if (!converged)
            s.rep.warn(critical ? "critical_speed_profile" : "solve_profile", "profile did not converge");

        try {
            auto fp = profile::fixed_points_of_fg(m->nl);
            json pts = json::array();
            for (const auto& x : fp.points)
                pts.push_back({{"kappa", x.kappa}, {"attracting", x.attracting}});
            s.rep.outputs["fixed_points"] = pts;
            s.rep.outputs["G_prime0"] = number(fp.G_prime0);
            if (!fp.points.empty()) {
                auto it = std::find_if(fp.points.begin(), fp.points.end(), [](const auto& x) { return x.attracting; });
                double kappa = (it != fp.points.end() ? *it : fp.points.front()).kappa;
                s.rep.outputs["persistence_xi1"] = kappa / 2.0;
                s.rep.outputs["persistence"] = profile::persistence_check(prof, kappa / 2.0, p.margin());
            }
        } catch (const NoPositiveFixedPoint& e) {
            s.rep.warn("fixed_points_of_fg", e.what());
        }

        std::vector<double> psi;
        if (m->epidemic)
            psi = models::epidemic_reconstruct(*m->epidemic, prof, c);
        else if (m->population)
            psi = models::population_reconstruct(*m->population, prof, critical ? prof.c : c);
        if (!psi.empty()) {
            s.rep.outputs["sup_psi"] = *std::max_element(psi.begin(), psi.end());
            s.time("reconstruct");
        }

        if (s.wants("csv")) {
            // Envelopes and the local residual live on the untranslated grid
            // of a direct solve only.
            std::vector<std::string> cols{"t", "phi"};
            std::vector<double> local;
            if (run) {
                cols.insert(cols.end(), {"sub", "super", "residual_local"});
                local = profile::residual_local(p, prof);
            }
            if (!psi.empty())
                cols.push_back("psi");
            CsvTable t(cols, s.rep.config_hash);
            std::vector<double> row;
            for (std::size_t i = 0; i < prof.values.size(); ++i) {
                row = {prof.grid.t(i), prof.values[i]};
                if (run)
                    row.insert(row.end(), {run->envelopes.lower[i], run->envelopes.upper[i], local[i]});
                if (!psi.empty())
                    row.push_back(psi[i]);
                t.add_row(row);
            }
            s.write("profile.csv", t.str());
            if (run) {
                CsvTable tr({"iteration", "phase", "sup_change", "sandwich_violation", "clip_count", "damped"},
                            s.rep.config_hash);
                for (std::size_t i = 0; i < run->trace.records.size(); ++i) {
                    const auto& r = run->trace.records[i];
                    tr.add_row({static_cast<double>(i + 1), static_cast<double>(r.phase), r.sup_change,
                                r.sandwich_violation, static_cast<double>(r.clip_count), r.damped ? 1.0 : 0.0});
                }
                s.write("trace.csv", tr.str());
            }
            if (crit) {
                CsvTable tc({"n", "c_n", "iterations", "residual", "converged", "max_derivative", "gap_to_previous"},
                            s.rep.config_hash);
                for (const auto& st : crit->steps)
                    tc.add_row({static_cast<double>(st.n), st.c_n, static_cast<double>(st.iterations),
                                st.residual_sup, st.converged ? 1.0 : 0.0, st.max_derivative, st.gap_to_previous});
                s.write("critical.csv", tc.str());
            }
        }
        if (s.wants("svg")) {
            std::vector<Series> series{{"phi", {}, prof.values}};
            for (std::size_t i = 0; i < prof.values.size(); ++i)
                series[0].x.push_back(prof.grid.t(i));
            if (!psi.empty())
                series.push_back({"psi", series[0].x, psi});
            s.write("profile.svg", svg_line_chart({"Wave profile, c = " + speed_tag(prof.c), "t", "value"}, series));
        }
        if (!converged)
            s.rep.exit_code = exit_numeric;
    });
}

int run(const std::string& verb, const std::string& config_path, const RunOptions& opt, std::ostream& out,
        std::ostream& err)
{
    RunReport rep;
    try {
        RunConfig cfg = load_config(config_path);
        if (verb == "validate")
            rep = cmd_validate(cfg, opt);
        else if (verb == "dispersion")
            rep = cmd_dispersion(cfg, opt);
        else if (verb == "minspeed")
            rep = cmd_minspeed(cfg, opt);
        else if (verb == "profile")
            rep = cmd_profile(cfg, opt);
        else {
            err << "unknown command '" << verb << "'\n";
            return exit_config;
        }
        fs::path dir = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.output.dir);
        fs::path report_path = dir / (verb + "_report.json");
        rep.files.push_back(report_path.string());
        write_atomic(report_path, rep.to_json().dump(2) + "\n");
    } catch (const ConfigError& e) {
        err << e.what() << '\n';
        return exit_config;
    }

    for (const auto& row : rep.hypotheses)
        out << std::left << std::setw(10) << row["condition"].get<std::string>() << ' '
            << (row["pass"].get<bool>() ? "pass" : "FAIL") << "  " << row["detail"].get<std::string>() << '\n';
    for (const auto& [k, v] : rep.quantities.items())
        out << k << " = " << v.dump() << '\n';
    for (const char* key : {"status", "converged", "iterations", "residual_ode", "tail_rate", "ordering_holds"})
        if (rep.outputs.contains(key))
            out << key << " = " << rep.outputs[key].dump() << '\n';
    for (const auto& w : rep.warnings)
        err << "warning [" << w.operation << "]: " << w.message << '\n';
    if (opt.verbose)
        out << rep.to_json().dump(2) << '\n';
    return rep.exit_code;
}

} // namespace semiwave::cli
