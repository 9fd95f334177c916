#pragma once

#include <utility>

#include "gla/assim/gla.hpp"
#include "gla/harness/config.hpp"

namespace gla::harness {

/// Per-step relative L2 errors of a predicted latent trajectory (one state
/// per row) against the true snapshot ensemble (one state per column).
/// Zero-norm truth steps yield NaN markers.
std::pair<core::Vector, core::Vector> compute_relative_errors(const Matrix& truth,
                                                              const Matrix& latent_trajectory,
                                                              const rom::PodAeModel& model);

// Pipeline stages. Each reads the inputs named in the config, writes its
// artifacts and returns; failures carry the stage name.
void stage_simulate(const ExperimentConfig& config);
void stage_train_rom(const ExperimentConfig& config);
void stage_gen_obs(const ExperimentConfig& config);
void stage_train_forecaster(const ExperimentConfig& config);
void stage_run_gla(const ExperimentConfig& config);
void stage_report(const ExperimentConfig& config);

/// Runs every stage in order; reproducible from the config seeds.
void run_experiment(const ExperimentConfig& config);

void write_run_csv(const std::string& path, const assim::GlaRunResult& run);

struct RunSummary {
    double mean_latent_err = 0.0;
    double mean_full_err = 0.0;
    double post_first_assim_latent_err = 0.0;
    double post_first_assim_full_err = 0.0;
    std::size_t assimilated_steps = 0;
};

RunSummary summarize_run(const assim::GlaRunResult& run, std::size_t first_assim_step);
RunSummary summarize_csv(const std::string& path, std::size_t first_assim_step);

}  // namespace gla::harness
