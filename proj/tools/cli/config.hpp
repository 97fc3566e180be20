#pragma once

#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semiwave::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, int line, const std::string& message);

    const std::string& field() const { return field_; }
    // 1-based; 0 when unknown.
    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    std::string field_;
    int line_;
    std::string message_;
};

// A named family with numeric parameters, e.g. {law: gamma, shape: 2, rate: 1}.
struct FamilySpec {
    std::string kind;
    std::map<std::string, double> params;
    std::vector<double> at;      // atoms only
    std::vector<double> weight;  // atoms only
    std::string path;
};

struct KernelSpec {
    std::string kind;  // separable | marine
    std::map<std::string, double> params;
    std::optional<FamilySpec> temporal;
    std::optional<FamilySpec> spatial;
    std::string path;
};

struct ModelConfig {
    std::string preset;  // marine | epidemic | population | custom
    std::map<std::string, double> params;
    std::optional<double> L;
    std::optional<FamilySpec> f;
    std::optional<FamilySpec> g;
    std::optional<FamilySpec> delay;
    std::optional<FamilySpec> dispersal;
    std::optional<KernelSpec> kernel;
};

struct DispersionConfig {
    std::vector<double> c;
    double z_min = 0.0;
    std::optional<double> z_max;
    int points = 200;
};

struct MinspeedConfig {
    std::optional<std::pair<double, double>> bracket;
    double speed_tol = 1e-9;
    double c_cap = 1e6;
};

struct ProfileConfig {
    std::optional<double> c;
    std::optional<double> c_factor;
    bool critical = false;
    std::optional<double> t_min;
    std::optional<double> t_max;
    std::optional<double> h;
    double points_per_efold = 20.0;
    int reg_n = 100;
    double tol = 1e-11;
    std::size_t max_iter = 2000;
    double residual_tol = 1e-4;
    int n_max = 16;
    double window_lo = -20.0;
    double window_hi = 20.0;
};

struct OutputConfig {
    std::string dir = ".";
    std::vector<std::string> formats{"csv"};
};

struct RunConfig {
    ModelConfig model;
    DispersionConfig dispersion;
    MinspeedConfig minspeed;
    ProfileConfig profile;
    OutputConfig output;
    // Source line of every field path that was read.
    std::map<std::string, int> lines;

    int line_of(const std::string& path) const;
    // Canonical form with defaults filled in.
    nlohmann::json echo() const;
    // FNV-1a of echo().dump(), as 16 hex digits.
    std::string hash() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

} // namespace semiwave::cli
