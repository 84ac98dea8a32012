// Command-line front end: five scenarios sharing one key=value config
// surface. Exit codes: 0 success, 2 config/usage problems, 3 physical-domain
// violations, 4 I/O failures.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinref/kleinref.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_domain = 3;
constexpr int exit_io = 4;

struct SubcommandArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_prefix;
};

void attach_common_flags(CLI::App* sub, SubcommandArgs& args) {
    sub->add_option("--config", args.config_path, "key=value config file");
    sub->add_option("--set", args.overrides, "override one key, e.g. --set grid.nx=256")
        ->take_all();
    sub->add_option("--out", args.out_prefix, "output path prefix");
}

int execute(kleinref::Scenario scenario, const SubcommandArgs& args) {
    using namespace kleinref;
    try {
        KeyValueConfig cfg = args.config_path.empty()
                                 ? KeyValueConfig{}
                                 : KeyValueConfig::from_file(args.config_path);
        for (const auto& assignment : args.overrides) cfg.set_assignment(assignment);

        const RunConfig rc = parse_run_config(scenario, cfg, args.out_prefix);
        const ScenarioResult result = run_scenario(rc);

        for (const auto& [key, value] : result.summary) std::cout << key << '=' << value << '\n';
        for (const auto& file : result.files) std::cout << "wrote " << file.string() << '\n';
        return exit_ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Negative-refraction scattering: left-handed-medium and Klein-step pictures"};
    app.require_subcommand(1);

    struct Entry {
        kleinref::Scenario scenario;
        const char* description;
    };
    const std::vector<Entry> entries = {
        {kleinref::Scenario::lhm, "beam onto a dispersive left-handed half-space"},
        {kleinref::Scenario::klein, "beam onto a sharp relativistic potential step"},
        {kleinref::Scenario::map, "tabulate the step energy profile matching the medium"},
        {kleinref::Scenario::coeffs, "transmission/reflection table over incidence angles"},
        {kleinref::Scenario::sweep, "T and R over a swept parameter"},
    };

    std::vector<SubcommandArgs> args(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        CLI::App* sub = app.add_subcommand(kleinref::to_string(entries[i].scenario),
                                           entries[i].description);
        attach_common_flags(sub, args[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    for (std::size_t i = 0; i < entries.size(); ++i)
        if (app.get_subcommands().front()->get_name() == kleinref::to_string(entries[i].scenario))
            return execute(entries[i].scenario, args[i]);
    return exit_config;
}
