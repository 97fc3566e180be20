#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace semiwave::cli {

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "config error";
          if (line > 0)
              os << " at line " << line;
          if (!field.empty())
              os << ", field '" << field << "'";
          os << ": " << message;
          return os.str();
      }()),
      field_(std::move(field)), line_(line), message_(message)
{
}

namespace {

struct ParamDef {
    const char* name;
    std::optional<double> fallback;
};

struct FamilyDef {
    const char* kind;
    std::vector<ParamDef> params;
};

const std::vector<FamilyDef>& law_defs()
{
    static const std::vector<FamilyDef> defs{
        {"dirac", {{"at", 0.0}}},
        {"exponential", {{"rate", std::nullopt}}},
        {"gamma", {{"shape", std::nullopt}, {"rate", std::nullopt}}},
        {"gaussian", {{"mean", 0.0}, {"variance", std::nullopt}}},
        {"laplace", {{"mean", 0.0}, {"scale", std::nullopt}}},
        {"uniform", {{"lo", std::nullopt}, {"hi", std::nullopt}}},
        {"atoms", {}},
    };
    return defs;
}

const std::vector<FamilyDef>& f_defs()
{
    static const std::vector<FamilyDef> defs{
        {"linear", {{"a", std::nullopt}}},
        {"quadratic", {{"a", std::nullopt}, {"b", std::nullopt}}},
        {"power", {{"a", std::nullopt}, {"k", std::nullopt}}},
    };
    return defs;
}

const std::vector<FamilyDef>& g_defs()
{
    static const std::vector<FamilyDef> defs{
        {"beverton_holt", {{"p", std::nullopt}, {"b", 1.0}}},
        {"ricker", {{"p", std::nullopt}, {"b", 1.0}}},
        {"mackey_glass", {{"p", std::nullopt}, {"k", std::nullopt}}},
        {"linear", {{"p", std::nullopt}}},
    };
    return defs;
}

std::string join(const std::string& a, const std::string& b)
{
    return a.empty() ? b : a + "." + b;
}

class Reader {
public:
    explicit Reader(std::map<std::string, int>& lines) : lines_(lines) {}

    int line(const YAML::Node& n) const { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

    void mark(const std::string& path, const YAML::Node& n) { lines_[path] = line(n); }

    void require_map(const YAML::Node& n, const std::string& path)
    {
        if (!n.IsMap())
            throw ConfigError(path, line(n), "expected a mapping");
    }

    void allow_keys(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed)
    {
        require_map(n, path);
        for (const auto& kv : n) {
            std::string key = kv.first.as<std::string>();
            if (!allowed.count(key)) {
                std::string list;
                for (const auto& a : allowed)
                    list += (list.empty() ? "" : ", ") + a;
                throw ConfigError(join(path, key), line(kv.first), "unknown key (allowed: " + list + ")");
            }
        }
    }

    double number(const YAML::Node& n, const std::string& path)
    {
        mark(path, n);
        if (!n.IsScalar())
            throw ConfigError(path, line(n), "expected a number");
        double v = 0.0;
        try {
            v = n.as<double>();
        } catch (const YAML::Exception&) {
            throw ConfigError(path, line(n), "expected a number, got '" + n.Scalar() + "'");
        }
        if (!std::isfinite(v))
            throw ConfigError(path, line(n), "must be finite");
        return v;
    }

    double positive(const YAML::Node& n, const std::string& path)
    {
        double v = number(n, path);
        if (!(v > 0.0))
            throw ConfigError(path, line(n), "must be positive");
        return v;
    }

    long integer(const YAML::Node& n, const std::string& path, long lo)
    {
        double v = number(n, path);
        if (v != std::floor(v) || v < static_cast<double>(lo))
            throw ConfigError(path, line(n), "must be an integer >= " + std::to_string(lo));
        return static_cast<long>(v);
    }

    bool boolean(const YAML::Node& n, const std::string& path)
    {
        mark(path, n);
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            throw ConfigError(path, line(n), "expected true or false");
        }
    }

    std::string text(const YAML::Node& n, const std::string& path)
    {
        mark(path, n);
        if (!n.IsScalar())
            throw ConfigError(path, line(n), "expected a string");
        return n.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& path)
    {
        mark(path, n);
        std::vector<double> out;
        if (n.IsScalar()) {
            out.push_back(number(n, path));
        } else if (n.IsSequence()) {
            for (std::size_t i = 0; i < n.size(); ++i)
                out.push_back(number(n[i], path + "[" + std::to_string(i) + "]"));
        } else {
            throw ConfigError(path, line(n), "expected a number or a list of numbers");
        }
        return out;
    }

    FamilySpec family(const YAML::Node& n, const std::string& path, const std::vector<FamilyDef>& defs)
    {
        require_map(n, path);
        mark(path, n);
        if (!n["type"])
            throw ConfigError(join(path, "type"), line(n), "missing");
        FamilySpec spec;
        spec.path = path;
        spec.kind = text(n["type"], join(path, "type"));
        const FamilyDef* def = nullptr;
        for (const auto& d : defs)
            if (spec.kind == d.kind)
                def = &d;
        if (!def) {
            std::string list;
            for (const auto& d : defs)
                list += (list.empty() ? "" : ", ") + std::string(d.kind);
            throw ConfigError(join(path, "type"), line(n["type"]),
                              "unknown type '" + spec.kind + "' (expected one of: " + list + ")");
        }
        if (spec.kind == "atoms") {
            allow_keys(n, path, {"type", "at", "weight"});
            if (!n["at"] || !n["weight"])
                throw ConfigError(path, line(n), "atoms need 'at' and 'weight' lists");
            spec.at = numbers(n["at"], join(path, "at"));
            spec.weight = numbers(n["weight"], join(path, "weight"));
            if (spec.at.size() != spec.weight.size() || spec.at.empty())
                throw ConfigError(join(path, "weight"), line(n["weight"]),
                                  "'at' and 'weight' must be nonempty and of equal length");
            return spec;
        }
        std::set<std::string> allowed{"type"};
        for (const auto& p : def->params)
            allowed.insert(p.name);
        allow_keys(n, path, allowed);
        for (const auto& p : def->params) {
            if (n[p.name])
                spec.params[p.name] = number(n[p.name], join(path, p.name));
            else if (p.fallback)
                spec.params[p.name] = *p.fallback;
            else
                throw ConfigError(join(path, p.name), line(n), "missing");
        }
        return spec;
    }

private:
    std::map<std::string, int>& lines_;
};

FamilySpec make_family(std::string kind, std::map<std::string, double> params, std::string path)
{
    FamilySpec s;
    s.kind = std::move(kind);
    s.params = std::move(params);
    s.path = std::move(path);
    return s;
}

KernelSpec parse_kernel(Reader& r, const YAML::Node& n, const std::string& path)
{
    r.require_map(n, path);
    r.mark(path, n);
    KernelSpec k;
    k.path = path;
    k.kind = n["type"] ? r.text(n["type"], join(path, "type")) : "separable";
    if (k.kind == "separable") {
        r.allow_keys(n, path, {"type", "temporal", "spatial"});
        if (!n["temporal"] || !n["spatial"])
            throw ConfigError(path, r.line(n), "separable kernel needs 'temporal' and 'spatial' laws");
        k.temporal = r.family(n["temporal"], join(path, "temporal"), law_defs());
        k.spatial = r.family(n["spatial"], join(path, "spatial"), law_defs());
    } else if (k.kind == "marine") {
        r.allow_keys(n, path, {"type", "v", "d", "mu"});
        const std::pair<const char*, double> defs[] = {{"v", 0.02}, {"d", 100.0}, {"mu", 0.001}};
        for (const auto& [key, fallback] : defs)
            k.params[key] = n[key] ? r.number(n[key], join(path, key)) : fallback;
    } else {
        throw ConfigError(join(path, "type"), r.line(n["type"]),
                          "unknown kernel type '" + k.kind + "' (expected separable or marine)");
    }
    return k;
}

void parse_model(Reader& r, const YAML::Node& n, ModelConfig& m)
{
    const std::string path = "model";
    r.require_map(n, path);
    r.mark(path, n);
    if (!n["preset"])
        throw ConfigError("model.preset", r.line(n), "missing (marine, epidemic, population or custom)");
    m.preset = r.text(n["preset"], "model.preset");

    std::vector<std::pair<const char*, double>> numeric;
    std::set<std::string> allowed{"preset", "L", "f", "g"};
    if (m.preset == "marine") {
        numeric = {{"v", 0.02}, {"d", 100.0}, {"mu", 0.001}, {"mu_a", 0.05}, {"p", 2.0}};
    } else if (m.preset == "epidemic") {
        numeric = {{"alpha", 1.0}};
        allowed.insert({"delay", "dispersal"});
    } else if (m.preset == "population") {
        numeric = {{"D", 1.0}, {"gamma", 1.0}};
        allowed.insert("kernel");
    } else if (m.preset == "custom") {
        allowed.insert("kernel");
    } else {
        throw ConfigError("model.preset", r.line(n["preset"]),
                          "unknown preset '" + m.preset + "' (expected marine, epidemic, population or custom)");
    }
    for (const auto& [key, fallback] : numeric)
        allowed.insert(key);
    r.allow_keys(n, path, allowed);

    for (const auto& [key, fallback] : numeric)
        m.params[key] = n[key] ? r.number(n[key], join(path, key)) : fallback;
    if (n["L"])
        m.L = r.positive(n["L"], "model.L");

    if (m.preset == "marine") {
        if (n["f"])
            throw ConfigError("model.f", r.line(n["f"]), "the marine preset fixes f(s) = mu_a s");
        if (n["g"])
            m.g = r.family(n["g"], "model.g", g_defs());
        else
            m.g = make_family("beverton_holt", {{"p", m.params["p"]}, {"b", 1.0}}, "model.g");
        return;
    }

    if (m.preset == "custom") {
        for (const char* key : {"kernel", "f", "g"})
            if (!n[key])
                throw ConfigError(join(path, key), r.line(n), "required by the custom preset");
    }
    m.f = n["f"] ? r.family(n["f"], "model.f", f_defs()) : make_family("linear", {{"a", 1.0}}, "model.f");
    m.g = n["g"] ? r.family(n["g"], "model.g", g_defs())
                 : make_family("beverton_holt", {{"p", 2.0}, {"b", 1.0}}, "model.g");
    if (m.preset == "epidemic") {
        m.delay = n["delay"] ? r.family(n["delay"], "model.delay", law_defs())
                             : make_family("exponential", {{"rate", 1.0}}, "model.delay");
        m.dispersal = n["dispersal"] ? r.family(n["dispersal"], "model.dispersal", law_defs())
                                     : make_family("gaussian", {{"mean", 0.0}, {"variance", 1.0}}, "model.dispersal");
    } else if (n["kernel"]) {
        m.kernel = parse_kernel(r, n["kernel"], "model.kernel");
    } else {
        KernelSpec k;
        k.kind = "separable";
        k.path = "model.kernel";
        k.temporal = make_family("exponential", {{"rate", 1.0}}, "model.kernel.temporal");
        k.spatial = make_family("gaussian", {{"mean", 0.0}, {"variance", 1.0}}, "model.kernel.spatial");
        m.kernel = k;
    }
}

void parse_dispersion(Reader& r, const YAML::Node& n, DispersionConfig& d)
{
    r.allow_keys(n, "dispersion", {"c", "z"});
    r.mark("dispersion", n);
    if (n["c"]) {
        d.c = r.numbers(n["c"], "dispersion.c");
        if (d.c.empty())
            throw ConfigError("dispersion.c", r.line(n["c"]), "range is empty");
    }
    if (n["z"]) {
        const YAML::Node z = n["z"];
        r.allow_keys(z, "dispersion.z", {"min", "max", "points"});
        if (z["min"])
            d.z_min = r.number(z["min"], "dispersion.z.min");
        if (d.z_min < 0.0)
            throw ConfigError("dispersion.z.min", r.line(z["min"]), "must be >= 0");
        if (z["max"]) {
            d.z_max = r.number(z["max"], "dispersion.z.max");
            if (!(*d.z_max > d.z_min))
                throw ConfigError("dispersion.z.max", r.line(z["max"]), "range is empty (max <= min)");
        }
        if (z["points"])
            d.points = static_cast<int>(r.integer(z["points"], "dispersion.z.points", 2));
    }
}

void parse_minspeed(Reader& r, const YAML::Node& n, MinspeedConfig& m)
{
    r.allow_keys(n, "minspeed", {"bracket", "speed_tol", "c_cap"});
    r.mark("minspeed", n);
    if (n["bracket"]) {
        auto b = r.numbers(n["bracket"], "minspeed.bracket");
        if (b.size() != 2 || !(b[1] > b[0]))
            throw ConfigError("minspeed.bracket", r.line(n["bracket"]), "expected [lo, hi] with lo < hi");
        m.bracket = std::make_pair(b[0], b[1]);
    }
    if (n["speed_tol"])
        m.speed_tol = r.positive(n["speed_tol"], "minspeed.speed_tol");
    if (n["c_cap"])
        m.c_cap = r.positive(n["c_cap"], "minspeed.c_cap");
}

void parse_profile(Reader& r, const YAML::Node& n, ProfileConfig& p)
{
    r.allow_keys(n, "profile", {"c", "c_factor", "critical", "grid", "reg_n", "tol", "max_iter",
                                "residual_tol", "critical_n_max", "window"});
    r.mark("profile", n);
    if (n["c"])
        p.c = r.number(n["c"], "profile.c");
    if (n["c_factor"])
        p.c_factor = r.positive(n["c_factor"], "profile.c_factor");
    if (p.c && p.c_factor)
        throw ConfigError("profile.c_factor", r.line(n["c_factor"]), "give either 'c' or 'c_factor', not both");
    if (n["critical"])
        p.critical = r.boolean(n["critical"], "profile.critical");
    if (n["grid"]) {
        const YAML::Node g = n["grid"];
        r.allow_keys(g, "profile.grid", {"t_min", "t_max", "h", "points_per_efold"});
        if (g["t_min"])
            p.t_min = r.number(g["t_min"], "profile.grid.t_min");
        if (g["t_max"])
            p.t_max = r.number(g["t_max"], "profile.grid.t_max");
        if (g["h"])
            p.h = r.positive(g["h"], "profile.grid.h");
        if (g["points_per_efold"])
            p.points_per_efold = r.positive(g["points_per_efold"], "profile.grid.points_per_efold");
        if (p.t_min && p.t_max && !(*p.t_max > *p.t_min))
            throw ConfigError("profile.grid.t_max", r.line(g["t_max"]), "range is empty (t_max <= t_min)");
        if (p.t_min && *p.t_min >= 0.0)
            throw ConfigError("profile.grid.t_min", r.line(g["t_min"]), "must be negative");
        if (p.t_max && *p.t_max <= 0.0)
            throw ConfigError("profile.grid.t_max", r.line(g["t_max"]), "must be positive");
    }
    if (n["reg_n"])
        p.reg_n = static_cast<int>(r.integer(n["reg_n"], "profile.reg_n", 1));
    if (n["tol"])
        p.tol = r.positive(n["tol"], "profile.tol");
    if (n["max_iter"])
        p.max_iter = static_cast<std::size_t>(r.integer(n["max_iter"], "profile.max_iter", 1));
    if (n["residual_tol"])
        p.residual_tol = r.positive(n["residual_tol"], "profile.residual_tol");
    if (n["critical_n_max"])
        p.n_max = static_cast<int>(r.integer(n["critical_n_max"], "profile.critical_n_max", 2));
    if (n["window"]) {
        auto w = r.numbers(n["window"], "profile.window");
        if (w.size() != 2 || !(w[1] > w[0]))
            throw ConfigError("profile.window", r.line(n["window"]), "expected [lo, hi] with lo < hi");
        p.window_lo = w[0];
        p.window_hi = w[1];
    }
}

void parse_output(Reader& r, const YAML::Node& n, OutputConfig& o)
{
    r.allow_keys(n, "output", {"dir", "formats"});
    r.mark("output", n);
    if (n["dir"])
        o.dir = r.text(n["dir"], "output.dir");
    if (n["formats"]) {
        const YAML::Node f = n["formats"];
        r.mark("output.formats", f);
        o.formats.clear();
        auto add = [&](const YAML::Node& item, const std::string& path) {
            std::string v = r.text(item, path);
            if (v != "csv" && v != "svg")
                throw ConfigError(path, r.line(item), "unknown format '" + v + "' (expected csv or svg)");
            o.formats.push_back(v);
        };
        if (f.IsSequence())
            for (std::size_t i = 0; i < f.size(); ++i)
                add(f[i], "output.formats[" + std::to_string(i) + "]");
        else
            add(f, "output.formats");
        if (o.formats.empty())
            throw ConfigError("output.formats", r.line(f), "range is empty");
    }
}

nlohmann::json family_json(const FamilySpec& f)
{
    nlohmann::json j;
    j["type"] = f.kind;
    for (const auto& [k, v] : f.params)
        j[k] = v;
    if (f.kind == "atoms") {
        j["at"] = f.at;
        j["weight"] = f.weight;
    }
    return j;
}

} // namespace

int RunConfig::line_of(const std::string& path) const
{
    std::string p = path;
    while (true) {
        auto it = lines.find(p);
        if (it != lines.end())
            return it->second;
        auto dot = p.find_last_of('.');
        if (dot == std::string::npos)
            return 0;
        p.resize(dot);
    }
}

nlohmann::json RunConfig::echo() const
{
    nlohmann::json j;
    auto& m = j["model"];
    m["preset"] = model.preset;
    for (const auto& [k, v] : model.params)
        m[k] = v;
    if (model.L)
        m["L"] = *model.L;
    if (model.f)
        m["f"] = family_json(*model.f);
    if (model.g)
        m["g"] = family_json(*model.g);
    if (model.delay)
        m["delay"] = family_json(*model.delay);
    if (model.dispersal)
        m["dispersal"] = family_json(*model.dispersal);
    if (model.kernel) {
        auto& k = m["kernel"];
        k["type"] = model.kernel->kind;
        for (const auto& [key, v] : model.kernel->params)
            k[key] = v;
        if (model.kernel->temporal)
            k["temporal"] = family_json(*model.kernel->temporal);
        if (model.kernel->spatial)
            k["spatial"] = family_json(*model.kernel->spatial);
    }

    auto& d = j["dispersion"];
    d["c"] = dispersion.c;
    d["z"]["min"] = dispersion.z_min;
    if (dispersion.z_max)
        d["z"]["max"] = *dispersion.z_max;
    d["z"]["points"] = dispersion.points;

    auto& s = j["minspeed"];
    if (minspeed.bracket)
        s["bracket"] = {minspeed.bracket->first, minspeed.bracket->second};
    s["speed_tol"] = minspeed.speed_tol;
    s["c_cap"] = minspeed.c_cap;

    auto& p = j["profile"];
    if (profile.c)
        p["c"] = *profile.c;
    if (profile.c_factor)
        p["c_factor"] = *profile.c_factor;
    p["critical"] = profile.critical;
    if (profile.t_min)
        p["grid"]["t_min"] = *profile.t_min;
    if (profile.t_max)
        p["grid"]["t_max"] = *profile.t_max;
    if (profile.h)
        p["grid"]["h"] = *profile.h;
    p["grid"]["points_per_efold"] = profile.points_per_efold;
    p["reg_n"] = profile.reg_n;
    p["tol"] = profile.tol;
    p["max_iter"] = profile.max_iter;
    p["residual_tol"] = profile.residual_tol;
    p["critical_n_max"] = profile.n_max;
    p["window"] = {profile.window_lo, profile.window_hi};

    j["output"]["formats"] = output.formats;
    return j;
}

std::string RunConfig::hash() const
{
    return fnv1a_hex(echo().dump());
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config_text(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
    }
    RunConfig cfg;
    Reader r(cfg.lines);
    if (!root || root.IsNull())
        throw ConfigError("", 0, "empty configuration");
    r.allow_keys(root, "", {"model", "dispersion", "minspeed", "profile", "output"});
    if (!root["model"])
        throw ConfigError("model", 0, "missing (exactly one model is required)");
    if (root["model"].IsSequence())
        throw ConfigError("model", r.line(root["model"]), "exactly one model is required");
    try {
        parse_model(r, root["model"], cfg.model);
        if (root["dispersion"])
            parse_dispersion(r, root["dispersion"], cfg.dispersion);
        if (root["minspeed"])
            parse_minspeed(r, root["minspeed"], cfg.minspeed);
        if (root["profile"])
            parse_profile(r, root["profile"], cfg.profile);
        if (root["output"])
            parse_output(r, root["output"], cfg.output);
    } catch (const YAML::Exception& e) {
        throw ConfigError("", e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("", 0, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

} // namespace semiwave::cli
