// dicke — command-line front end: run experiments from JSON configuration
// files, validate configurations, list available experiments.
//
// Exit codes: 0 success; 2 configuration error (parse error, unknown key,
// invariant violation, unusable output location); 3 solver failure (too
// many unconverged cells, aborted time evolution).

#include <dicke/config.hpp>
#include <dicke/experiments.hpp>
#include <dicke/version.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{
        "dicke — steady states and dissipative dynamics of an interacting "
        "atom array in a lossy cavity"};
    app.set_version_flag("--version", std::string("dicke ") + dicke::version_string);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    int threads = 1;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "JSON configuration file")->required();
    run->add_option("--out", out_dir, "output directory (default: from the config)");
    run->add_option("--threads", threads, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    run->add_option("--format", format, "table format: csv or json (default: from the config)")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* validate = app.add_subcommand(
        "validate", "check a config file and print the fully resolved configuration");
    validate->add_option("config", config_path, "JSON configuration file")->required();

    CLI::App* list =
        app.add_subcommand("list-experiments", "list available experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // command-line misuse is a configuration error
    }

    try {
        if (list->parsed()) {
            for (const auto& name : dicke::cfg::experiment_names())
                std::cout << name << "\n";
            return 0;
        }
        if (validate->parsed()) {
            const dicke::cfg::ResolvedConfig cfg = dicke::cfg::load_config(config_path);
            std::cout << cfg.raw().dump(2) << "\n";
            return 0;
        }
        const dicke::cfg::ResolvedConfig cfg = dicke::cfg::load_config(config_path);
        const dicke::exp::RunReport report =
            dicke::exp::run_experiment(cfg, out_dir, format, threads);
        for (const auto& file : report.files) std::cout << "wrote " << file << "\n";
        std::printf("done: %zu solver calls, %.2f%% unconverged, %.1f s\n",
                    report.stats.cells_total, 100.0 * report.stats.unconverged_fraction(),
                    report.wall_seconds);
        return 0;
    } catch (const dicke::cfg::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dicke::exp::SolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
