#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gla/harness/burgers.hpp"

namespace gla::harness {

/// Flat key-value experiment configuration. Every field maps to one
/// documented key; the same registry backs the config-file parser and the
/// CLI flags.
struct ExperimentConfig {
    // paths
    std::string snapshots_path = "snapshots.txt";
    std::string obs_path = "observations.txt";
    std::string models_dir = "models";
    std::string output_dir = "outputs";

    // synthetic dynamics
    std::size_t burgers_n = 256;
    double burgers_viscosity = 0.01;
    double burgers_dt = 2.5e-4;
    std::size_t burgers_steps = 3996;
    std::size_t burgers_stride = 4;
    std::string burgers_ic = "gaussian";  // gaussian | zero
    double burgers_base = 0.15;
    double burgers_amplitude = 0.85;
    double burgers_center = 0.3;
    double burgers_width = 0.06;

    // state reduction; qprime = 0 keeps every principal component available
    // after the train split
    std::size_t rom_qprime = 0;
    std::size_t rom_latent_dim = 8;
    std::size_t rom_hidden = 128;
    double rom_learning_rate = 1e-3;
    std::size_t rom_epochs = 400;
    std::size_t rom_batch = 32;

    // observation reduction (same architecture, own dimensions)
    std::size_t obsrom_qprime = 0;
    std::size_t obsrom_latent_dim = 8;

    // forecaster
    std::size_t fc_l_input = 10;
    std::size_t fc_l_output = 10;
    std::size_t fc_hidden = 32;
    double fc_learning_rate = 2e-3;
    std::size_t fc_epochs = 300;
    std::size_t fc_batch = 32;

    // observation operator
    std::size_t obs_m = 200;
    double obs_p = 0.05;
    std::string obs_marginal = "quadratic";  // quadratic | reciprocal
    double obs_noise_std = 0.0;

    // assimilation
    int gla_degree = 4;
    double gla_lhs_range = 0.3;
    std::size_t gla_lhs_count = 1000;
    std::size_t gla_max_iterations = 50;
    double gla_outer_tol = 0.05;
    double gla_optimizer_tol = 0.01;
    std::string gla_refit = "per_step";  // per_step | per_burst
    double gla_background_variance = 1.0;
    double gla_observation_variance = 0.1;
    /// Comma-separated inclusive step ranges, e.g. "570-599,720-749".
    std::string gla_schedule = "450-459,600-609,750-759";
    std::size_t warmup_len = 0;  // 0 = use fc_l_input
    std::size_t horizon = 1000;

    std::size_t effective_warmup() const { return warmup_len == 0 ? fc_l_input : warmup_len; }

    // seeds
    std::uint64_t seed_rom = 1;
    std::uint64_t seed_fc = 2;
    std::uint64_t seed_obs = 3;
    std::uint64_t seed_gla = 4;

    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;
    void apply(const std::string& key, const std::string& value);

    BurgersSpec burgers_spec() const;
    std::set<std::size_t> schedule_steps() const;

    /// All keys in declaration order, each with a getter on this instance.
    std::vector<std::pair<std::string, std::string>> entries() const;
    static const std::vector<std::string>& key_names();
};

std::set<std::size_t> parse_schedule(const std::string& text);

}  // namespace gla::harness
