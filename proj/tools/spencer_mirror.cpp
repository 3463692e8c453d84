// spencer-mirror: mirror verification, sweeps, Riemann-Roch and paper reproduction.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spencer/app/commands.hpp"

int main(int argc, char** argv) {
    using spencer::app::CommandOptions;

    CLI::App app{"Numerical mirror-symmetry checks for Spencer complexes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", spencer::app::kToolVersion);

    CommandOptions opts;
    std::string config;
    std::string preset;
    std::string out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON configuration file");
        sub->add_option("--preset", preset, "named preset (sweep: paper, riemann-roch: k3)");
        sub->add_option("--out", out, "output directory (overrides SPENCER_MIRROR_OUT)");
        sub->add_flag("--dump-matrices", opts.dump_matrices, "write operator matrices as CSV");
    };
    add_common(app.add_subcommand("verify-mirror", "compare harmonic dimensions at λ and -λ"));
    add_common(app.add_subcommand("sweep", "run a list of mirror configurations"));
    add_common(app.add_subcommand("riemann-roch", "Calabi-Yau Riemann-Roch decomposition"));
    add_common(app.add_subcommand("paper", "reproduce all checked claims"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : spencer::app::kConfigError;
    }

    if (!config.empty()) opts.config = config;
    if (!preset.empty()) opts.preset = preset;
    if (!out.empty()) opts.out = out;
    const std::string command = app.get_subcommands().front()->get_name();
    return spencer::app::run_command(command, opts, std::cout, std::cerr);
}
