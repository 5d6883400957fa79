// ymlat: sample, gauge-fix and measure lattice Yang-Mills fields on the 2-torus.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ymlat/config.hpp"
#include "ymlat/errors.hpp"
#include "ymlat/pipeline.hpp"

int main(int argc, char** argv) {
    using namespace ymlat;
    CLI::App app{"Lattice Yang-Mills on the 2-torus: sampling, gauge fixing, norms and moment scaling"};
    app.fallthrough();
    app.require_subcommand(1, 1);

    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "override as key=value (repeatable)");
    for (const auto& key : config_keys()) app.add_option("--" + key, flags[key], "config key '" + key + "'");

    const std::map<std::string, StageResult (*)(const ExperimentConfig&)> commands{
        {"sample", cmd_sample}, {"gaugefix", cmd_gaugefix}, {"norms", cmd_norms}, {"scaling", cmd_scaling}, {"all", cmd_all}};
    app.add_subcommand("sample", "run the Markov chains and write gauge-field snapshots");
    app.add_subcommand("gaugefix", "axial + binary Landau gauge on every snapshot");
    app.add_subcommand("norms", "growth and rho norms of the gauge-fixed one-forms");
    app.add_subcommand("scaling", "holonomy and q-variation moments against rectangle area");
    app.add_subcommand("all", "sample, gaugefix, norms and scaling in sequence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }

    try {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        for (const auto& key : config_keys())
            if (app.count("--" + key) > 0) set_config_value(cfg, key, flags[key]);
        for (const auto& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        validate(cfg);
        const auto* sub = app.get_subcommands().front();
        const auto result = commands.at(sub->get_name())(cfg);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << sub->get_name() << ": " << result.files.size() << " files in " << output_directory(cfg).string()
                  << " (config " << config_hash(cfg) << ")\n";
        if (result.exit_code == exit_numeric) std::cerr << "error: gauge fixing failed on every sample\n";
        return result.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
