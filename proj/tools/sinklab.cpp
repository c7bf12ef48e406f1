#include "sinklab/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"sinklab: diffusion in a V potential with a time-dependent point sink"};
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> sets;
    std::string out;

    const char* names[] = {"solve", "oracle", "compare", "sweep", "selftest"};
    const char* help[] = {"analytic field by numerical Laplace inversion",
                          "Crank-Nicolson (and optional Monte Carlo) reference solution",
                          "analytic vs Crank-Nicolson vs Volterra, plus literal-form diagnostics",
                          "Cartesian parameter sweep of S(t) and P(0,t)",
                          "built-in consistency checks"};
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], help[i]);
        sub->add_option("--config", config, "INI config file");
        sub->add_option("--set", sets, "override, section.key=value (repeatable)");
        sub->add_option("--out", out, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    std::optional<std::filesystem::path> config_path;
    if (!config.empty()) config_path = config;
    std::optional<std::filesystem::path> out_dir;
    if (!out.empty()) out_dir = out;
    return sinklab::cli::run_command(command, config_path, sets, out_dir, std::cout, std::cerr);
}
