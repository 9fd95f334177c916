#include "gla/assim/gla.hpp"

#include <cmath>
#include <stdexcept>

#include "gla/surrogate/lhs.hpp"

namespace gla::assim {

namespace {

Covariance random_spd(std::size_t dim, core::Rng rng) {
    Matrix l(dim, dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = 0.3 * rng.normal();
        l(i, i) = 0.5 + rng.uniform01();
    }
    Matrix m(dim, dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= std::min(i, j); ++k) s += l(i, k) * l(j, k);
            m(i, j) = s;
        }
    return Covariance::from_matrix(std::move(m));
}

surrogate::PolynomialSurrogate random_linear_operator(std::size_t dim_x, std::size_t dim_y,
                                                      core::Rng rng) {
    surrogate::PolynomialSurrogate op;
    op.degree = 1;
    op.input_dim = dim_x;
    op.output_dim = dim_y;
    op.exponents = surrogate::monomial_exponents(dim_x, 1);
    op.coefficients = Matrix(dim_y, op.exponents.size());
    for (double& c : op.coefficients.data) c = rng.normal();
    return op;
}

}  // namespace

ExpectedCostStats expected_cost_check(const Covariance& background_cov,
                                      const Covariance& observation_cov, std::size_t n_mc,
                                      std::uint64_t seed) {
    if (n_mc < 1000) throw std::invalid_argument("expected_cost_check: n_mc must be >= 1000");
    const std::size_t dim_x = background_cov.dim();
    const std::size_t dim_y = observation_cov.dim();

    core::Rng rng(seed);
    AssimProblem problem;
    problem.background_cov = background_cov;
    problem.observation_cov = observation_cov;
    problem.op = random_linear_operator(dim_x, dim_y, rng.fork(11));

    const Vector x_true = rng.normal_vector(dim_x);
    const Vector h_true = problem.op.eval(x_true);

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n_mc; ++k) {
        const Vector delta_b = background_cov.sample(rng);
        const Vector delta_y = observation_cov.sample(rng);
        problem.background = core::add(x_true, delta_b);
        problem.observation = core::add(h_true, delta_y);
        const double j = cost(problem, x_true);
        sum += j;
        sum_sq += j * j;
    }
    ExpectedCostStats stats;
    stats.draws = n_mc;
    stats.mean = sum / static_cast<double>(n_mc);
    const double var =
        (sum_sq - sum * sum / static_cast<double>(n_mc)) / static_cast<double>(n_mc - 1);
    stats.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_mc));
    return stats;
}

ExpectedCostStats expected_cost_check(std::size_t dim_x, std::size_t dim_y, std::size_t n_mc,
                                      std::uint64_t seed) {
    core::Rng rng(seed);
    const Covariance b = random_spd(dim_x, rng.fork(1));
    const Covariance r = random_spd(dim_y, rng.fork(2));
    return expected_cost_check(b, r, n_mc, seed ^ 0x9e3779b97f4a7c15ULL);
}

GlaRunResult run_gla(const forecast::Seq2SeqForecaster& forecaster,
                     const rom::PodAeModel& state_model, const obsgen::LatentObsOperator& op,
                     const Matrix& truth, const Matrix& observations,
                     const Covariance& background_cov, const Covariance& observation_cov,
                     std::size_t warmup_len, std::size_t horizon, const GlaConfig& config) {
    forecaster.validate();
    state_model.validate();
    const std::size_t latent_dim = forecaster.latent_dim;
    if (state_model.latent_dim != latent_dim)
        throw std::invalid_argument("run_gla: forecaster and state model latent dims differ");
    if (op.input_dim() != latent_dim)
        throw std::invalid_argument("run_gla: operator input dim differs from latent dim");
    if (background_cov.dim() != latent_dim)
        throw std::invalid_argument("run_gla: background covariance dim mismatch");
    if (observation_cov.dim() != op.output_dim())
        throw std::invalid_argument("run_gla: observation covariance dim mismatch");
    if (truth.rows != state_model.dof())
        throw std::invalid_argument("run_gla: truth dof differs from state model");
    if (horizon > truth.cols || horizon > observations.cols)
        throw std::invalid_argument("run_gla: horizon exceeds provided data");
    if (warmup_len < forecaster.l_input || warmup_len >= horizon)
        throw std::invalid_argument("run_gla: warmup must cover l_input and precede the horizon");
    if (observations.rows != op.h.m)
        throw std::invalid_argument("run_gla: observation stream height differs from operator");
    for (std::size_t t : config.schedule)
        if (t < warmup_len || t >= horizon)
            throw std::invalid_argument("run_gla: scheduled step outside the prediction range");

    GlaRunResult result;
    result.warmup_len = warmup_len;
    result.latent_trajectory = Matrix(horizon, latent_dim);
    for (std::size_t t = 0; t < warmup_len; ++t)
        result.latent_trajectory.set_row(t, rom::pod_ae_encode(state_model, truth.col(t)));

    Matrix pending;  // states produced by the last forecaster call
    std::size_t pending_pos = 0;
    surrogate::PolynomialSurrogate current_surrogate;
    bool have_surrogate = false;

    for (std::size_t t = warmup_len; t < horizon; ++t) {
        if (pending.rows == 0 || pending_pos >= pending.rows) {
            Matrix window(forecaster.l_input, latent_dim);
            for (std::size_t r = 0; r < forecaster.l_input; ++r)
                window.set_row(r,
                               result.latent_trajectory.row(t - forecaster.l_input + r));
            pending = forecast::predict_window(forecaster, window);
            pending_pos = 0;
        }
        Vector state = pending.row(pending_pos++);

        GlaStepRecord record;
        record.step = t;

        if (config.schedule.count(t)) {
            record.assimilated = true;
            const Vector y_latent = rom::pod_ae_encode(op.y_model, observations.col(t));

            const bool burst_continues = have_surrogate && config.schedule.count(t - 1) > 0;
            if (config.refit_per_step || !burst_continues) {
                surrogate::LhsDesign design;
                design.center = state;
                design.range = config.lhs_range;
                design.count = config.lhs_count;
                design.scale_floor = config.lhs_scale_floor;
                design.seed = core::derive_seed(config.seed, t);
                const Matrix samples = surrogate::lhs_sample(design);
                const Matrix targets = op.eval_batch(samples);
                current_surrogate =
                    surrogate::fit_local_polynomial(samples, targets, config.poly_degree);
                have_surrogate = true;
            }

            AssimProblem problem;
            problem.background = state;
            problem.observation = y_latent;
            problem.background_cov = background_cov;
            problem.observation_cov = observation_cov;
            problem.op = current_surrogate;

            record.cost_before = cost(problem, state);
            const double grad0 = core::norm2(cost_gradient(problem, state));
            if (grad0 <= config.outer_grad_tol) {
                record.cost_after = record.cost_before;
                record.cost_trace = {record.cost_before};
            } else {
                MinimizeOptions options;
                options.max_iterations = config.max_iterations;
                options.grad_tol = config.optimizer_grad_tol;
                MinimizeResult res = minimize(problem, options);
                state = res.analysis;
                record.cost_after = res.cost_trace.back();
                record.optimizer_iters = res.iterations;
                record.optimizer_warning = res.line_search_failed;
                record.cost_trace = std::move(res.cost_trace);
            }
            // Restart the forecaster window from the corrected state.
            pending = Matrix();
            pending_pos = 0;
        }

        result.latent_trajectory.set_row(t, state);
        const auto [latent_err, full_err] = rom::relative_errors(state_model, truth.col(t), state);
        record.latent_rel_err = latent_err;
        record.full_rel_err = full_err;
        result.records.push_back(std::move(record));
    }
    return result;
}

}  // namespace gla::assim
