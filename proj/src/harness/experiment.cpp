#include "gla/harness/experiment.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gla/core/io.hpp"
#include "gla/core/rng.hpp"

namespace gla::harness {

namespace {

/// Homogeneous 80/20 split: every fifth snapshot (index 4 mod 5) is a test
/// snapshot, the four between consecutive test snapshots train the models.
std::vector<std::size_t> training_columns(std::size_t n) {
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < n; ++t)
        if (t % 5 != 4) idx.push_back(t);
    return idx;
}

Matrix select_columns(const Matrix& m, const std::vector<std::size_t>& cols) {
    Matrix out(m.rows, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) out.set_col(k, m.col(cols[k]));
    return out;
}

neural::TrainConfig rom_train_config(const ExperimentConfig& config) {
    neural::TrainConfig tc;
    tc.learning_rate = config.rom_learning_rate;
    tc.epochs = config.rom_epochs;
    tc.batch_size = config.rom_batch;
    tc.seed = config.seed_rom;
    return tc;
}

std::string state_model_dir(const ExperimentConfig& c) { return c.models_dir + "/state_ae"; }
std::string obs_model_dir(const ExperimentConfig& c) { return c.models_dir + "/obs_ae"; }
std::string forecaster_dir(const ExperimentConfig& c) { return c.models_dir + "/forecaster"; }

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
    throw std::runtime_error("stage " + stage + ": " + e.what());
}

}  // namespace

std::pair<core::Vector, core::Vector> compute_relative_errors(const Matrix& truth,
                                                              const Matrix& latent_trajectory,
                                                              const rom::PodAeModel& model) {
    if (truth.cols != latent_trajectory.rows)
        throw std::invalid_argument("compute_relative_errors: trajectory lengths differ");
    core::Vector latent_errs(truth.cols), full_errs(truth.cols);
    for (std::size_t t = 0; t < truth.cols; ++t) {
        const auto [le, fe] = rom::relative_errors(model, truth.col(t), latent_trajectory.row(t));
        latent_errs[t] = le;
        full_errs[t] = fe;
    }
    return {latent_errs, full_errs};
}

void stage_simulate(const ExperimentConfig& config) {
    try {
        const Matrix snapshots = generate_synthetic_snapshots(config.burgers_spec());
        core::write_matrix(config.snapshots_path, snapshots);
    } catch (const std::exception& e) {
        stage_fail("simulate", e);
    }
}

void stage_train_rom(const ExperimentConfig& config) {
    try {
        const Matrix snapshots = core::read_matrix(config.snapshots_path);
        const Matrix train = select_columns(snapshots, training_columns(snapshots.cols));
        // qprime = 0 requests all principal components available after the
        // train split.
        const std::size_t qprime = config.rom_qprime == 0
                                       ? std::min(train.rows, train.cols)
                                       : config.rom_qprime;
        rom::PodAeOptions options;
        options.hidden_widths = {config.rom_hidden};
        const rom::PodAeFit fit = rom::fit_pod_ae(train, qprime, config.rom_latent_dim,
                                                  rom_train_config(config), options);
        core::ensure_directory(config.models_dir);
        rom::save_pod_ae(state_model_dir(config), fit.model);
        core::write_vector(state_model_dir(config) + "/loss_history.txt", fit.loss_history);
    } catch (const std::exception& e) {
        stage_fail("train-rom", e);
    }
}

void stage_gen_obs(const ExperimentConfig& config) {
    try {
        const Matrix snapshots = core::read_matrix(config.snapshots_path);
        const obsgen::SelectionMatrix h = obsgen::sample_selection_matrix(
            config.obs_m, snapshots.rows, config.obs_p, config.seed_obs);
        const obsgen::MarginalFn f = obsgen::MarginalFn::parse(config.obs_marginal);

        Matrix observations(config.obs_m, snapshots.cols);
        for (std::size_t t = 0; t < snapshots.cols; ++t)
            observations.set_col(t, obsgen::apply_full_observation(h, f, snapshots.col(t)));
        if (config.obs_noise_std > 0.0) {
            core::Rng rng(core::derive_seed(config.seed_obs, 1));
            for (double& v : observations.data) v += config.obs_noise_std * rng.normal();
        }

        const Matrix train = select_columns(observations, training_columns(observations.cols));
        const std::size_t qprime = config.obsrom_qprime == 0
                                       ? std::min(train.rows, train.cols)
                                       : config.obsrom_qprime;
        neural::TrainConfig tc = rom_train_config(config);
        tc.seed = core::derive_seed(config.seed_obs, 2);
        rom::PodAeOptions options;
        options.hidden_widths = {config.rom_hidden};
        const rom::PodAeFit fit = rom::fit_pod_ae(train, qprime, config.obsrom_latent_dim, tc,
                                                  options);

        core::ensure_directory(config.models_dir);
        core::write_matrix(config.obs_path, observations);
        obsgen::write_selection_matrix(config.models_dir + "/selection.txt", h);
        rom::save_pod_ae(obs_model_dir(config), fit.model);
        core::write_vector(obs_model_dir(config) + "/loss_history.txt", fit.loss_history);
    } catch (const std::exception& e) {
        stage_fail("gen-obs", e);
    }
}

void stage_train_forecaster(const ExperimentConfig& config) {
    try {
        const Matrix snapshots = core::read_matrix(config.snapshots_path);
        const rom::PodAeModel state_model = rom::load_pod_ae(state_model_dir(config));
        const Matrix latent = rom::pod_ae_encode_all(state_model, snapshots);

        forecast::ForecastTrainConfig fc;
        fc.hidden_dim = config.fc_hidden;
        fc.base.learning_rate = config.fc_learning_rate;
        fc.base.epochs = config.fc_epochs;
        fc.base.batch_size = config.fc_batch;
        fc.base.seed = config.seed_fc;
        const forecast::ForecastFit fit =
            forecast::train_forecaster(latent, config.fc_l_input, config.fc_l_output, fc);

        forecast::save_forecaster(forecaster_dir(config), fit.model);
        core::write_vector(forecaster_dir(config) + "/loss_history.txt", fit.loss_history);
    } catch (const std::exception& e) {
        stage_fail("train-forecaster", e);
    }
}

namespace {

void write_summary(const std::string& path, const RunSummary& free_run, const RunSummary& gla) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    auto line = [&](const std::string& name, double fr, double g) {
        out << name << ": free_run=" << core::format_double(fr)
            << " gla=" << core::format_double(g);
        if (fr > 0.0 && std::isfinite(fr) && std::isfinite(g))
            out << " reduction=" << core::format_double(1.0 - g / fr);
        out << '\n';
    };
    out << "assimilated_steps: " << gla.assimilated_steps << '\n';
    line("mean_latent_rel_err", free_run.mean_latent_err, gla.mean_latent_err);
    line("mean_full_rel_err", free_run.mean_full_err, gla.mean_full_err);
    line("post_first_assim_latent_rel_err", free_run.post_first_assim_latent_err,
         gla.post_first_assim_latent_err);
    line("post_first_assim_full_rel_err", free_run.post_first_assim_full_err,
         gla.post_first_assim_full_err);
}

}  // namespace

void stage_run_gla(const ExperimentConfig& config) {
    try {
        const Matrix snapshots = core::read_matrix(config.snapshots_path);
        const Matrix observations = core::read_matrix(config.obs_path);
        const rom::PodAeModel state_model = rom::load_pod_ae(state_model_dir(config));
        rom::PodAeModel obs_model = rom::load_pod_ae(obs_model_dir(config));
        const obsgen::SelectionMatrix h =
            obsgen::read_selection_matrix(config.models_dir + "/selection.txt");
        const obsgen::MarginalFn f = obsgen::MarginalFn::parse(config.obs_marginal);
        const forecast::Seq2SeqForecaster forecaster =
            forecast::load_forecaster(forecaster_dir(config));

        const obsgen::LatentObsOperator op =
            obsgen::build_latent_obs_operator(std::move(obs_model), h, f, state_model);

        const assim::Covariance b = assim::Covariance::scaled_identity(
            state_model.latent_dim, config.gla_background_variance);
        const assim::Covariance r = assim::Covariance::scaled_identity(
            op.output_dim(), config.gla_observation_variance);

        assim::GlaConfig gc;
        gc.poly_degree = config.gla_degree;
        gc.lhs_range = config.gla_lhs_range;
        gc.lhs_count = config.gla_lhs_count;
        gc.max_iterations = config.gla_max_iterations;
        gc.outer_grad_tol = config.gla_outer_tol;
        gc.optimizer_grad_tol = config.gla_optimizer_tol;
        if (config.gla_refit == "per_step")
            gc.refit_per_step = true;
        else if (config.gla_refit == "per_burst")
            gc.refit_per_step = false;
        else
            throw std::invalid_argument("unknown gla_refit: " + config.gla_refit);
        gc.seed = config.seed_gla;
        gc.schedule = config.schedule_steps();

        const std::size_t horizon = std::min(config.horizon, snapshots.cols);
        const assim::GlaRunResult gla_run =
            assim::run_gla(forecaster, state_model, op, snapshots, observations, b, r,
                           config.effective_warmup(), horizon, gc);

        assim::GlaConfig free_config = gc;
        free_config.schedule.clear();
        const assim::GlaRunResult free_run =
            assim::run_gla(forecaster, state_model, op, snapshots, observations, b, r,
                           config.effective_warmup(), horizon, free_config);

        core::ensure_directory(config.output_dir);
        write_run_csv(config.output_dir + "/gla.csv", gla_run);
        write_run_csv(config.output_dir + "/freerun.csv", free_run);

        const std::size_t first_assim =
            gc.schedule.empty() ? config.effective_warmup() : *gc.schedule.begin();
        write_summary(config.output_dir + "/summary.txt",
                      summarize_run(free_run, first_assim), summarize_run(gla_run, first_assim));
    } catch (const std::exception& e) {
        stage_fail("run-gla", e);
    }
}

void stage_report(const ExperimentConfig& config) {
    try {
        const std::set<std::size_t> schedule = config.schedule_steps();
        const std::size_t first_assim =
            schedule.empty() ? config.effective_warmup() : *schedule.begin();
        const RunSummary free_run =
            summarize_csv(config.output_dir + "/freerun.csv", first_assim);
        const RunSummary gla = summarize_csv(config.output_dir + "/gla.csv", first_assim);
        write_summary(config.output_dir + "/summary.txt", free_run, gla);
    } catch (const std::exception& e) {
        stage_fail("report", e);
    }
}

void run_experiment(const ExperimentConfig& config) {
    stage_simulate(config);
    stage_train_rom(config);
    stage_gen_obs(config);
    stage_train_forecaster(config);
    stage_run_gla(config);
}

void write_run_csv(const std::string& path, const assim::GlaRunResult& run) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "step,latent_rel_err,full_rel_err,assimilated_flag,cost_before,cost_after,"
           "optimizer_iters\n";
    for (const auto& rec : run.records) {
        out << rec.step << ',' << core::format_double(rec.latent_rel_err) << ','
            << core::format_double(rec.full_rel_err) << ',' << (rec.assimilated ? 1 : 0) << ',';
        if (rec.assimilated)
            out << core::format_double(rec.cost_before) << ','
                << core::format_double(rec.cost_after);
        else
            out << ',';
        out << ',' << rec.optimizer_iters << '\n';
    }
}

namespace {

RunSummary summarize_rows(const std::vector<std::array<double, 4>>& rows,
                          std::size_t first_assim_step) {
    // rows: step, latent, full, assimilated
    RunSummary s;
    double latent_sum = 0.0, full_sum = 0.0, post_latent = 0.0, post_full = 0.0;
    std::size_t count = 0, post_count = 0;
    for (const auto& row : rows) {
        if (std::isfinite(row[1]) && std::isfinite(row[2])) {
            latent_sum += row[1];
            full_sum += row[2];
            ++count;
            if (row[0] >= static_cast<double>(first_assim_step)) {
                post_latent += row[1];
                post_full += row[2];
                ++post_count;
            }
        }
        if (row[3] > 0.5) ++s.assimilated_steps;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mean_latent_err = count ? latent_sum / static_cast<double>(count) : nan;
    s.mean_full_err = count ? full_sum / static_cast<double>(count) : nan;
    s.post_first_assim_latent_err = post_count ? post_latent / static_cast<double>(post_count) : nan;
    s.post_first_assim_full_err = post_count ? post_full / static_cast<double>(post_count) : nan;
    return s;
}

}  // namespace

RunSummary summarize_run(const assim::GlaRunResult& run, std::size_t first_assim_step) {
    std::vector<std::array<double, 4>> rows;
    for (const auto& rec : run.records)
        rows.push_back({static_cast<double>(rec.step), rec.latent_rel_err, rec.full_rel_err,
                        rec.assimilated ? 1.0 : 0.0});
    return summarize_rows(rows, first_assim_step);
}

RunSummary summarize_csv(const std::string& path, std::size_t first_assim_step) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::vector<std::array<double, 4>> rows;
    while (std::getline(in, line)) {
        std::array<double, 4> row{};
        std::stringstream ss(line);
        std::string field;
        for (int c = 0; c < 4 && std::getline(ss, field, ','); ++c)
            row[static_cast<std::size_t>(c)] = field.empty() ? 0.0 : std::stod(field);
        rows.push_back(row);
    }
    return summarize_rows(rows, first_assim_step);
}

}  // namespace gla::harness
