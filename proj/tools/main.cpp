#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "commands.hpp"

// hyprel <command> [--config file.json] [--out dir] [--verbose]
//
// With no config file the command runs with its built-in defaults; a config
// file must name the same command it is run under (or be passed to `run`).

int main(int argc, char** argv) {
    using namespace hyprel::cli;

    CLI::App app{"relative entropy and renormalized area for asymptotically "
                 "hyperbolic hypersurfaces"};
    app.require_subcommand(1);

    struct SubOpts {
        std::string config;
        std::string out;
        bool verbose = false;
    };
    std::vector<std::pair<CLI::App*, SubOpts>> subs;
    subs.reserve(command_names().size() + 1);

    auto add_common = [](CLI::App* sc, SubOpts& o) {
        sc->add_option("--config", o.config, "JSON run configuration");
        sc->add_option("--out", o.out, "output directory (overrides the config)");
        sc->add_flag("--verbose", o.verbose, "print per-check results");
    };

    for (const auto& name : command_names()) {
        auto& slot = subs.emplace_back();
        slot.first = app.add_subcommand(name, "run the " + name + " experiment");
        add_common(slot.first, slot.second);
    }
    // generic entry point: the command comes from the config file
    auto& run_slot = subs.emplace_back();
    run_slot.first = app.add_subcommand("run", "run a config file");
    add_common(run_slot.first, run_slot.second);
    run_slot.first->get_option("--config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [sc, opts] : subs) {
            if (!sc->parsed()) continue;
            RunConfig cfg;
            if (!opts.config.empty()) {
                cfg = load_config_file(opts.config);
                if (sc->get_name() != "run" && cfg.command != sc->get_name())
                    throw ConfigError("config.command: '" + cfg.command +
                                      "' does not match subcommand '" + sc->get_name() + "'");
            } else {
                cfg.command = sc->get_name();
            }
            const std::string out_dir = !opts.out.empty() ? opts.out : cfg.output_dir;
            const CommandOutcome outcome = execute(cfg, out_dir, opts.verbose);
            for (const auto& c : outcome.checks)
                std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << "\n";
            return exit_code_for(outcome);
        }
        std::cerr << "no subcommand\n";
        return 4;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
