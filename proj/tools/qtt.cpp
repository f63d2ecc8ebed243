// qtt.cpp — Command-line front end for the three-terminal heat transport library

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtt/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Steady-state heat currents of a three-level transistor coupled to three bosonic baths"};
    app.require_subcommand(0, 1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::string config_path;
    std::string output;
    std::vector<std::string> overrides;
    unsigned threads = 1;
    bool list_keys = false;

    const std::vector<std::pair<std::string, std::string>> descriptions{
        {"currents", "Heat currents of every scheme versus alpha_m"},
        {"amplification", "Amplification factors versus T_m"},
        {"mechanism", "NIBA rate and current components versus T_m"},
        {"ndtc", "Two-terminal current versus delta_T at selected orders"},
        {"rates-dump", "Rate tables at the configured point"},
        {"classify", "Regime boundaries from scheme deviations versus alpha_m"},
    };
    for (const auto& [name, help] : descriptions) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "Flat key = value config file (defaults if omitted)")->check(CLI::ExistingFile);
        sub->add_option("-o,--output", output, "Output CSV path (default <subcommand>.csv)");
        sub->add_option("-s,--set", overrides, "Extra key=value assignment, applied after the file")->take_all();
        sub->add_option("-j,--threads", threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    }
    app.add_flag("--list-keys", list_keys, "Print the recognised config keys and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qtt::exit_parse;
    }
    if (list_keys) {
        for (const auto& k : qtt::known_keys()) std::cout << k << '\n';
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << "error: a subcommand is required\n";
        return qtt::exit_parse;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    qtt::ModelConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw qtt::ParseError(0, "cannot open config file '" + config_path + "'");
            cfg = qtt::parse_config(in);
        }
        for (const auto& o : overrides) qtt::apply_assignment(cfg, o);
    } catch (const qtt::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return qtt::exit_parse;
    }
    return qtt::run_subcommand(name, cfg, {threads, output});
}
