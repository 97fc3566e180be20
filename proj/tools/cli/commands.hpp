#pragma once

#include "config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace semiwave::cli {

enum ExitCode : int {
    exit_success = 0,
    exit_validation = 1,
    exit_numeric = 2,
    exit_config = 3,
};

struct Warning {
    std::string operation;
    std::string message;
};

struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::vector<std::string>> formats;
    bool seedless = false;
    bool verbose = false;
    std::ostream* log = nullptr;
};

struct RunReport {
    std::string command;
    nlohmann::json config;
    std::string config_hash;
    nlohmann::json hypotheses = nlohmann::json::array();
    nlohmann::json quantities = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    nlohmann::json timings = nlohmann::json::object();
    std::vector<Warning> warnings;
    std::vector<std::string> files;
    int exit_code = exit_success;

    void warn(std::string operation, std::string message);
    nlohmann::json to_json() const;
};

RunReport cmd_validate(const RunConfig& cfg, const RunOptions& opt = {});
RunReport cmd_dispersion(const RunConfig& cfg, const RunOptions& opt = {});
RunReport cmd_minspeed(const RunConfig& cfg, const RunOptions& opt = {});
RunReport cmd_profile(const RunConfig& cfg, const RunOptions& opt = {});

// Loads the config, runs `verb`, writes the report and returns the exit code.
int run(const std::string& verb, const std::string& config_path, const RunOptions& opt, std::ostream& out,
        std::ostream& err);

} // namespace semiwave::cli
