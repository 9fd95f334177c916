#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gla/harness/experiment.hpp"

namespace {

/// Registers --<key> flags for every experiment config key on the given
/// subcommand; values collected as strings and applied over the config file.
void add_config_options(CLI::App* cmd, std::vector<std::pair<std::string, std::string>>& overrides,
                        std::string& config_path) {
    cmd->add_option("--config", config_path, "experiment config file (key = value lines)");
    for (const auto& key : gla::harness::ExperimentConfig::key_names()) {
        cmd->add_option_function<std::string>(
            "--" + key,
            [&overrides, key](const std::string& value) { overrides.emplace_back(key, value); },
            "override config key " + key);
    }
}

gla::harness::ExperimentConfig assemble_config(
    const std::string& config_path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    gla::harness::ExperimentConfig config;
    if (!config_path.empty()) config = gla::harness::ExperimentConfig::load(config_path);
    for (const auto& [key, value] : overrides) config.apply(key, value);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-space surrogate forecasting with generalised latent assimilation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    struct Stage {
        const char* name;
        const char* description;
        void (*run)(const gla::harness::ExperimentConfig&);
    };
    const Stage stages[] = {
        {"simulate", "generate synthetic snapshots", gla::harness::stage_simulate},
        {"train-rom", "fit the state POD autoencoder", gla::harness::stage_train_rom},
        {"gen-obs", "sample the observation operator, generate and encode observations",
         gla::harness::stage_gen_obs},
        {"train-forecaster", "train the latent sequence-to-sequence forecaster",
         gla::harness::stage_train_forecaster},
        {"run-gla", "run assimilation and the paired free run, write CSV reports",
         gla::harness::stage_run_gla},
        {"report", "recompute the summary from existing CSV reports", gla::harness::stage_report},
    };

    std::vector<std::pair<CLI::App*, const Stage*>> bound;
    for (const auto& stage : stages) {
        CLI::App* cmd = app.add_subcommand(stage.name, stage.description);
        add_config_options(cmd, overrides, config_path);
        bound.emplace_back(cmd, &stage);
    }
    CLI::App* all = app.add_subcommand("run-all", "run every stage in order");
    add_config_options(all, overrides, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        const gla::harness::ExperimentConfig config = assemble_config(config_path, overrides);
        if (all->parsed()) {
            gla::harness::run_experiment(config);
            return 0;
        }
        for (const auto& [cmd, stage] : bound) {
            if (cmd->parsed()) {
                stage->run(config);
                return 0;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
