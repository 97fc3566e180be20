#include "commands.hpp"
#include "output.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    using namespace semiwave::cli;

    CLI::App app{"Minimal speeds and wave profiles for non-local delayed reaction-diffusion equations"};
    app.set_version_flag("--version", std::string(version_string));
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::string formats;
    bool seedless = false;
    bool verbose = false;

    const std::pair<const char*, const char*> verbs[] = {
        {"validate", "Check the model hypotheses and kernel mass"},
        {"dispersion", "Tabulate the characteristic functions over z for the configured speeds"},
        {"minspeed", "Compute the minimal speeds of chi_0 and chi_L"},
        {"profile", "Solve for a wave profile"},
    };
    for (const auto& [name, help] : verbs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
        sub->add_option("--format", formats, "Comma-separated output formats: csv, svg");
        sub->add_flag("--seedless", seedless, "Reserved; the computations use no random numbers");
        sub->add_flag("--verbose", verbose, "Progress messages and the full report on stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    RunOptions opt;
    opt.seedless = seedless;
    opt.verbose = verbose;
    opt.log = &std::cerr;
    if (!out_dir.empty())
        opt.out_dir = out_dir;
    if (!formats.empty()) {
        std::vector<std::string> list;
        std::stringstream ss(formats);
        for (std::string item; std::getline(ss, item, ',');) {
            if (item != "csv" && item != "svg") {
                std::cerr << "unknown format '" << item << "' (expected csv or svg)\n";
                return exit_config;
            }
            list.push_back(item);
        }
        opt.formats = list;
    }
    return run(app.get_subcommands().front()->get_name(), config_path, opt, std::cout, std::cerr);
}
