/**
 * @file main.cpp
 * @brief clab command line entry point
 */

#include "commands.hpp"

#include "clab/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

int main(int argc, char** argv) {
    using namespace clab::cli;
    CLI::App app{"Space-charge limited current solvers"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> about = {
        {"solve1d", "1D profile for constant j or j = lambda y^q"},
        {"bifurcation", "time map regimes over a lambda grid"},
        {"solve2d", "2D solve between the angular subsolution and u = y"},
        {"wings", "cathode flux under refinement for several beta"},
        {"parabolic", "IMEX trajectory and comparison decay"},
        {"verify-sub", "checks of the angular subsolution"},
        {"verify-super", "checks of the three-region supersolution"},
    };
    std::map<std::string, std::string> config_path;
    std::map<std::string, std::map<std::string, std::optional<std::string>>> flags;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config_path[name], "flat key=value file");
        auto& f = flags[name];
        for (const auto& k : key_specs()) {
            f[k.name];
            sub->add_option("--" + k.name, f[k.name], k.help);
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return clab::exit_code::validation;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    try {
        if (!config_path[command].empty()) load_config_file(cfg, config_path[command]);
        for (const auto& [k, v] : flags[command])
            if (v) cfg.set(k, *v);
    } catch (const clab::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return clab::exit_code::validation;
    }
    return run_command(command, cfg, std::cout, std::cerr);
}
