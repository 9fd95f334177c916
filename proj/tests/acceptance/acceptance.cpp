// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails. Criteria 5, 7, 8
// and 10 share one trained desk-scale stack built in ./acceptance_work.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gla/assim/gla.hpp"
#include "gla/core/io.hpp"
#include "gla/core/linalg.hpp"
#include "gla/core/rng.hpp"
#include "gla/harness/experiment.hpp"
#include "gla/mesh/graph.hpp"
#include "gla/surrogate/lhs.hpp"
#include "support/oracles.hpp"

using namespace gla;
using core::Matrix;
using core::Vector;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- 1: POD

void criterion_pod() {
    const auto t0 = std::chrono::steady_clock::now();
    core::Rng rng(101);
    bool ortho_ok = true, residual_ok = true, monotone_ok = true;
    double worst_defect = 0.0, worst_residual_gap = 0.0;

    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t dof = 8 + rng.next_below(57);   // <= 64
        const std::size_t n = 8 + rng.next_below(57);
        Matrix x(dof, n);
        for (double& v : x.data) v = rng.normal();
        const std::size_t q = 1 + rng.next_below(std::min(dof, n));
        const auto basis = rom::fit_pod(x, q);

        const Matrix gram_q = core::matmul_tn(basis.modes, basis.modes);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j)
                worst_defect = std::max(worst_defect,
                                        std::abs(gram_q(i, j) - (i == j ? 1.0 : 0.0)));

        double err2 = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const Vector col = x.col(t);
            const Vector rec = rom::pod_decode(basis, rom::pod_encode(basis, col));
            for (std::size_t i = 0; i < dof; ++i) err2 += (col[i] - rec[i]) * (col[i] - rec[i]);
        }
        const Vector sigma = oracle::singular_values(x);
        double tail = 0.0;
        for (std::size_t i = q; i < sigma.size(); ++i) tail += sigma[i] * sigma[i];
        const double gap = std::abs(std::sqrt(err2) - std::sqrt(tail));
        worst_residual_gap = std::max(worst_residual_gap, gap);
        if (gap > 1e-8 * std::max(1.0, std::sqrt(tail))) residual_ok = false;
    }
    ortho_ok = worst_defect < 1e-10;

    Matrix x(24, 16);
    for (double& v : x.data) v = rng.normal();
    double previous = 1e300;
    for (std::size_t q = 1; q <= 16; ++q) {
        const auto basis = rom::fit_pod(x, q);
        double err2 = 0.0;
        for (std::size_t t = 0; t < 16; ++t) {
            const Vector col = x.col(t);
            const Vector rec = rom::pod_decode(basis, rom::pod_encode(basis, col));
            for (std::size_t i = 0; i < 24; ++i) err2 += (col[i] - rec[i]) * (col[i] - rec[i]);
        }
        if (err2 > previous + 1e-12) monotone_ok = false;
        previous = err2;
    }

    verdict(1, ortho_ok && residual_ok && monotone_ok,
            "POD orthonormality, Eckart-Young residual vs dense oracle, monotone truncation",
            "max defect " + fmt(worst_defect) + ", max residual gap " + fmt(worst_residual_gap) +
                ", " + fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------------- 2: neural gradients

void criterion_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    core::Rng rng(211);
    double worst = 0.0;

    const std::vector<neural::Activation> acts{
        neural::Activation::linear(), neural::Activation::relu(),
        neural::Activation::leaky_relu(0.3), neural::Activation::sigmoid(),
        neural::Activation::tanh()};
    for (int trial = 0; trial < 100; ++trial) {
        auto net = neural::make_dense_network(
            {3, 5, 2}, {acts[trial % acts.size()], neural::Activation::linear()}, rng);
        Matrix inputs(4, 3), targets(4, 2);
        for (double& v : inputs.data) v = rng.normal();
        for (double& v : targets.data) v = rng.normal();
        const auto grads = neural::backprop_gradients(net, inputs, targets);

        Vector analytic, numeric;
        const double step = 1e-5;
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            auto probe = [&](double* param, const double grad_value) {
                analytic.push_back(grad_value);
                const double saved = *param;
                *param = saved + step;
                const double lp = neural::mse_loss(net.forward_batch(inputs), targets);
                *param = saved - step;
                const double lm = neural::mse_loss(net.forward_batch(inputs), targets);
                *param = saved;
                numeric.push_back((lp - lm) / (2.0 * step));
            };
            for (std::size_t k = 0; k < net.layers[l].weights.data.size(); ++k)
                probe(&net.layers[l].weights.data[k], grads.weights[l].data[k]);
            for (std::size_t k = 0; k < net.layers[l].bias.size(); ++k)
                probe(&net.layers[l].bias[k], grads.bias[l][k]);
        }
        worst = std::max(worst, oracle::max_relative_error(analytic, numeric));
    }

    for (int trial = 0; trial < 100; ++trial) {
        auto cell = neural::init_lstm_cell(3, 2, rng);
        Matrix h0(2, 3), c0(2, 3), x(2, 2), target(2, 3);
        for (double& v : h0.data) v = rng.normal();
        for (double& v : c0.data) v = rng.normal();
        for (double& v : x.data) v = rng.normal();
        for (double& v : target.data) v = rng.normal();

        neural::LstmStepCache cache;
        Matrix h, c;
        neural::lstm_step(cell, h0, c0, x, h, c, &cache);
        Matrix dh(2, 3);
        for (std::size_t k = 0; k < dh.data.size(); ++k)
            dh.data[k] = 2.0 * (h.data[k] - target.data[k]) / static_cast<double>(h.data.size());
        auto grads = neural::LstmGradients::zeros(cell);
        Matrix dh_prev, dc_prev, dx;
        neural::lstm_step_backward(cell, cache, dh, Matrix(2, 3, 0.0), grads, dh_prev, dc_prev,
                                   dx);

        auto loss_fn = [&]() {
            Matrix hh, cc;
            neural::lstm_step(cell, h0, c0, x, hh, cc);
            return neural::mse_loss(hh, target);
        };
        Vector analytic, numeric;
        const double step = 1e-5;
        auto probe = [&](double* param, double grad_value) {
            analytic.push_back(grad_value);
            const double saved = *param;
            *param = saved + step;
            const double lp = loss_fn();
            *param = saved - step;
            const double lm = loss_fn();
            *param = saved;
            numeric.push_back((lp - lm) / (2.0 * step));
        };
        for (std::size_t k = 0; k < cell.w_forget.data.size(); ++k) {
            probe(&cell.w_forget.data[k], grads.w_forget.data[k]);
            probe(&cell.w_input.data[k], grads.w_input.data[k]);
            probe(&cell.w_cell.data[k], grads.w_cell.data[k]);
            probe(&cell.w_output.data[k], grads.w_output.data[k]);
        }
        for (std::size_t k = 0; k < cell.b_forget.size(); ++k) {
            probe(&cell.b_forget[k], grads.b_forget[k]);
            probe(&cell.b_input[k], grads.b_input[k]);
            probe(&cell.b_cell[k], grads.b_cell[k]);
            probe(&cell.b_output[k], grads.b_output[k]);
        }
        worst = std::max(worst, oracle::max_relative_error(analytic, numeric));
    }

    verdict(2, worst < 1e-5,
            "analytic gradients vs central differences, dense nets and LSTM cell, 100 instances each",
            "max rel err " + fmt(worst) + ", " + fmt(elapsed_s(t0)) + " s");
}

// -------------------------------------- 3: linear-Gaussian equivalence

surrogate::PolynomialSurrogate linear_operator(const Matrix& a) {
    surrogate::PolynomialSurrogate op;
    op.degree = 1;
    op.input_dim = a.cols;
    op.output_dim = a.rows;
    op.exponents = surrogate::monomial_exponents(a.cols, 1);
    op.coefficients = Matrix(a.rows, a.cols + 1, 0.0);
    for (std::size_t o = 0; o < a.rows; ++o)
        for (std::size_t d = 0; d < a.cols; ++d) op.coefficients(o, 1 + d) = a(o, d);
    return op;
}

assim::Covariance random_cov(std::size_t n, core::Rng& rng) {
    Matrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) l(i, j) = 0.3 * rng.normal();
        l(i, i) = 0.6 + rng.uniform01();
    }
    return assim::Covariance::from_matrix(core::matmul_nt(l, l));
}

void criterion_linear_gaussian() {
    const auto t0 = std::chrono::steady_clock::now();
    core::Rng rng(331);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim_x = 2 + rng.next_below(11);  // <= 12
        const std::size_t dim_y = 1 + rng.next_below(dim_x);
        assim::AssimProblem problem;
        problem.background = rng.normal_vector(dim_x);
        problem.observation = rng.normal_vector(dim_y);
        problem.background_cov = random_cov(dim_x, rng);
        problem.observation_cov = random_cov(dim_y, rng);
        Matrix h(dim_y, dim_x);
        for (double& v : h.data) v = rng.normal();
        problem.op = linear_operator(h);

        const auto result = assim::minimize(problem, {400, 1e-12});

        const Matrix bht = core::matmul_nt(problem.background_cov.matrix(), h);
        Matrix hbht = core::matmul(h, bht);
        for (std::size_t i = 0; i < dim_y; ++i)
            for (std::size_t j = 0; j < dim_y; ++j)
                hbht(i, j) += problem.observation_cov.matrix()(i, j);
        const Vector innovation =
            core::sub(problem.observation, core::matvec(h, problem.background));
        const Vector update = core::matvec(bht, oracle::dense_solve(hbht, innovation));
        Vector expected = core::add(problem.background, update);
        worst = std::max(worst, oracle::max_relative_error(result.analysis, expected));
    }
    verdict(3, worst < 1e-6,
            "quasi-Newton analysis equals the closed-form linear-Gaussian estimate, 50 problems",
            "max rel err " + fmt(worst) + ", " + fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------ 4: expectation identity

void criterion_expectation() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<std::size_t, std::size_t>> dims{{1, 1}, {8, 6}, {30, 30}};
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const auto [dx, dy] = dims[k];
        const auto stats = assim::expected_cost_check(dx, dy, 100000, 4000 + k);
        const double target = 0.5 * static_cast<double>(dx + dy);
        const double dev = std::abs(stats.mean - target);
        if (dev > 3.0 * stats.std_error) ok = false;
        detail += "(" + std::to_string(dx) + "," + std::to_string(dy) + "): mean " +
                  fmt(stats.mean) + " vs " + fmt(target) + " +- " + fmt(3.0 * stats.std_error) +
                  "; ";
    }
    verdict(4, ok, "Monte Carlo cost at the truth averages to (dim_x + dim_y)/2",
            detail + fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------------- shared stack setup

struct Stack {
    harness::ExperimentConfig quadratic;
    harness::ExperimentConfig reciprocal;
};

harness::ExperimentConfig desk_config(const std::string& dir) {
    harness::ExperimentConfig config;
    config.snapshots_path = dir + "/snapshots.txt";
    config.obs_path = dir + "/obs_quadratic.txt";
    config.models_dir = dir + "/models";
    config.output_dir = dir + "/out_quadratic";
    config.burgers_viscosity = 0.004;
    config.burgers_dt = 5e-4;
    config.burgers_steps = 2000;
    config.burgers_stride = 2;
    config.burgers_amplitude = 1.0;
    config.burgers_width = 0.04;
    config.rom_qprime = 64;
    config.rom_latent_dim = 8;
    config.rom_epochs = 400;
    config.obsrom_qprime = 64;
    config.obsrom_latent_dim = 12;
    config.fc_l_input = 10;
    config.fc_l_output = 10;
    config.fc_hidden = 24;
    config.fc_epochs = 150;
    config.obs_m = 300;
    config.obs_p = 0.05;
    config.obs_marginal = "quadratic";
    config.warmup_len = 100;
    config.horizon = 1001;
    config.gla_schedule = "450-459,600-609,750-759";
    return config;
}

Stack build_stack(const std::string& dir) {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    Stack stack;
    stack.quadratic = desk_config(dir);
    harness::stage_simulate(stack.quadratic);
    harness::stage_train_rom(stack.quadratic);
    harness::stage_train_forecaster(stack.quadratic);
    harness::stage_gen_obs(stack.quadratic);

    stack.reciprocal = stack.quadratic;
    stack.reciprocal.obs_marginal = "reciprocal";
    stack.reciprocal.obs_path = dir + "/obs_reciprocal.txt";
    stack.reciprocal.models_dir = dir + "/models_reciprocal";
    stack.reciprocal.output_dir = dir + "/out_reciprocal";
    // The reciprocal stack shares snapshots, the state model and the
    // forecaster; only the observation side is its own.
    std::filesystem::create_directories(stack.reciprocal.models_dir);
    std::filesystem::copy(stack.quadratic.models_dir + "/state_ae",
                          stack.reciprocal.models_dir + "/state_ae",
                          std::filesystem::copy_options::recursive);
    std::filesystem::copy(stack.quadratic.models_dir + "/forecaster",
                          stack.reciprocal.models_dir + "/forecaster",
                          std::filesystem::copy_options::recursive);
    harness::stage_gen_obs(stack.reciprocal);

    // Informational, not gated: full-space reconstruction of the two-stage
    // reduction against plain POD truncated at the same latent dimension.
    const Matrix snaps = core::read_matrix(stack.quadratic.snapshots_path);
    const auto model = rom::load_pod_ae(stack.quadratic.models_dir + "/state_ae");
    const auto pod8 = rom::fit_pod(snaps, model.latent_dim);
    double pod_err = 0.0, ae_err = 0.0, norm = 0.0;
    for (std::size_t t = 0; t < snaps.cols; ++t) {
        const Vector col = snaps.col(t);
        const Vector pod_rec = rom::pod_decode(pod8, rom::pod_encode(pod8, col));
        const Vector ae_rec = rom::pod_ae_decode(model, rom::pod_ae_encode(model, col));
        for (std::size_t i = 0; i < col.size(); ++i) {
            pod_err += (col[i] - pod_rec[i]) * (col[i] - pod_rec[i]);
            ae_err += (col[i] - ae_rec[i]) * (col[i] - ae_rec[i]);
            norm += col[i] * col[i];
        }
    }
    std::printf("info: full-space relative reconstruction error at latent dim %zu: "
                "pod %.4g, pod-ae %.4g (recorded, not gated)\n",
                model.latent_dim, std::sqrt(pod_err / norm), std::sqrt(ae_err / norm));
    std::fflush(stdout);
    return stack;
}

// --------------------------------------- 5: surrogate fidelity trends

void criterion_surrogate_trends(const Stack& stack) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& config = stack.quadratic;
    const Matrix snaps = core::read_matrix(config.snapshots_path);
    const auto state_model = rom::load_pod_ae(config.models_dir + "/state_ae");
    auto obs_model = rom::load_pod_ae(config.models_dir + "/obs_ae");
    const auto h = obsgen::read_selection_matrix(config.models_dir + "/selection.txt");
    const auto op = obsgen::build_latent_obs_operator(
        std::move(obs_model), h, obsgen::MarginalFn::parse("quadratic"), state_model);
    const Vector center = rom::pod_ae_encode(state_model, snaps.col(500));
    const auto reference = [&](const Vector& x) { return op.eval(x); };

    std::vector<double> rmse;
    for (double range : {0.1, 0.5, 0.9}) {
        surrogate::LhsDesign train_design{center, range, 1000, 91, 1e-3};
        surrogate::LhsDesign test_design{center, range, 1000, 92, 1e-3};
        const Matrix samples = surrogate::lhs_sample(train_design);
        const Matrix targets = op.eval_batch(samples);
        const auto s = surrogate::fit_local_polynomial(samples, targets, 4);
        rmse.push_back(
            surrogate::validate_surrogate(s, reference, surrogate::lhs_sample(test_design))
                .rel_rmse);
    }
    const bool range_trend = rmse[0] < rmse[1] && rmse[1] < rmse[2];

    surrogate::LhsDesign design{center, 0.3, 1000, 93, 1e-3};
    const Matrix samples = surrogate::lhs_sample(design);
    const Matrix targets = op.eval_batch(samples);
    bool degree_trend = true;
    double previous = 1e300;
    for (int degree = 1; degree <= 5; ++degree) {
        const auto s = surrogate::fit_local_polynomial(samples, targets, degree);
        double residual = 0.0;
        for (std::size_t k = 0; k < samples.rows; ++k) {
            const Vector diff = core::sub(s.eval(samples.row(k)), targets.row(k));
            residual += core::dot(diff, diff);
        }
        if (residual > previous + 1e-9) degree_trend = false;
        previous = residual;
    }

    verdict(5, range_trend && degree_trend,
            "surrogate test RMSE rises with sampling range; training residual falls with degree",
            "rmse " + fmt(rmse[0]) + " < " + fmt(rmse[1]) + " < " + fmt(rmse[2]) + ", " +
                fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------ 6: exact recovery + jacobian

void criterion_exact_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    core::Rng rng(661);
    double worst_coeff = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t dim = 2 + rng.next_below(3);
        const int degree = 2 + static_cast<int>(rng.next_below(2));
        const auto exps = surrogate::monomial_exponents(dim, degree);
        Matrix coeff(2, exps.size());
        for (double& c : coeff.data) c = rng.normal();
        surrogate::LhsDesign design{rng.normal_vector(dim), 0.5,
                                    4 * exps.size(), 700 + trial, 1e-3};
        const Matrix samples = surrogate::lhs_sample(design);
        Matrix targets(samples.rows, 2);
        for (std::size_t k = 0; k < samples.rows; ++k)
            targets.set_row(k,
                            core::matvec(coeff, surrogate::monomial_features(samples.row(k), exps)));
        const auto s = surrogate::fit_local_polynomial(samples, targets, degree);
        for (std::size_t i = 0; i < coeff.data.size(); ++i)
            worst_coeff = std::max(
                std::abs(s.coefficients.data[i] - coeff.data[i]) /
                    std::max(1.0, std::abs(coeff.data[i])),
                worst_coeff);
    }

    double worst_jac = 0.0;
    surrogate::PolynomialSurrogate quartic;
    quartic.degree = 4;
    quartic.input_dim = 4;
    quartic.output_dim = 3;
    quartic.exponents = surrogate::monomial_exponents(4, 4);
    quartic.coefficients = Matrix(3, quartic.exponents.size());
    for (double& c : quartic.coefficients.data) c = rng.normal();
    for (int trial = 0; trial < 25; ++trial) {
        const Vector x = rng.uniform_vector(4, -1.0, 1.0);
        const Matrix jac = quartic.jacobian(x);
        for (std::size_t o = 0; o < 3; ++o) {
            const Vector fd = oracle::finite_difference_gradient(
                [&](const Vector& v) { return quartic.eval(v)[o]; }, x, 1e-6);
            Vector analytic(4);
            for (std::size_t d = 0; d < 4; ++d) analytic[d] = jac(o, d);
            worst_jac = std::max(worst_jac, oracle::max_relative_error(analytic, fd));
        }
    }

    verdict(6, worst_coeff < 1e-8 && worst_jac < 1e-6,
            "exact recovery of representable polynomials; surrogate jacobian vs differences",
            "coeff err " + fmt(worst_coeff) + ", jac err " + fmt(worst_jac) + ", " +
                fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------------- 7 + 8: GLA efficacy

struct GlaOutcome {
    double reduction = 0.0;
    bool descent_ok = true;
    bool non_degradation_ok = true;
    bool ran = false;
};

GlaOutcome run_gla_case(const harness::ExperimentConfig& config) {
    GlaOutcome outcome;
    const Matrix snaps = core::read_matrix(config.snapshots_path);
    const Matrix observations = core::read_matrix(config.obs_path);
    const auto state_model = rom::load_pod_ae(config.models_dir + "/state_ae");
    auto obs_model = rom::load_pod_ae(config.models_dir + "/obs_ae");
    const auto h = obsgen::read_selection_matrix(config.models_dir + "/selection.txt");
    const auto forecaster = forecast::load_forecaster(config.models_dir + "/forecaster");
    const auto op = obsgen::build_latent_obs_operator(
        std::move(obs_model), h, obsgen::MarginalFn::parse(config.obs_marginal), state_model);
    const auto b = assim::Covariance::scaled_identity(state_model.latent_dim,
                                                      config.gla_background_variance);
    const auto r =
        assim::Covariance::scaled_identity(op.output_dim(), config.gla_observation_variance);

    assim::GlaConfig gc;
    gc.schedule = config.schedule_steps();
    gc.seed = config.seed_gla;
    const auto gla_run = assim::run_gla(forecaster, state_model, op, snaps, observations, b, r,
                                        config.effective_warmup(), config.horizon, gc);
    assim::GlaConfig free_config = gc;
    free_config.schedule.clear();
    const auto free_run = assim::run_gla(forecaster, state_model, op, snaps, observations, b, r,
                                         config.effective_warmup(), config.horizon, free_config);

    const std::size_t first = *gc.schedule.begin();
    const auto gla_summary = harness::summarize_run(gla_run, first);
    const auto free_summary = harness::summarize_run(free_run, first);
    outcome.reduction = 1.0 - gla_summary.post_first_assim_full_err /
                                  free_summary.post_first_assim_full_err;

    for (const auto& rec : gla_run.records) {
        if (!rec.assimilated) continue;
        if (rec.cost_after > rec.cost_before + 1e-12) outcome.non_degradation_ok = false;
        for (std::size_t k = 1; k < rec.cost_trace.size(); ++k)
            if (rec.cost_trace[k] > rec.cost_trace[k - 1] + 1e-12) outcome.descent_ok = false;
    }
    outcome.ran = true;
    return outcome;
}

void criteria_gla(const Stack& stack) {
    const auto t0 = std::chrono::steady_clock::now();
    const GlaOutcome quad = run_gla_case(stack.quadratic);
    const GlaOutcome recip = run_gla_case(stack.reciprocal);

    verdict(7, quad.reduction >= 0.30 && recip.reduction >= 0.30,
            "assimilation cuts the post-first-burst full-space error by at least 30%",
            "quadratic " + fmt(100.0 * quad.reduction) + "%, reciprocal " +
                fmt(100.0 * recip.reduction) + "%, " + fmt(elapsed_s(t0)) + " s");
    verdict(8,
            quad.descent_ok && quad.non_degradation_ok && recip.descent_ok &&
                recip.non_degradation_ok,
            "optimizer traces are monotone and analyses never exceed background costs", "");
}

// -------------------------------------------------------- 9: RCM bounds

void criterion_rcm() {
    const auto t0 = std::chrono::steady_clock::now();
    core::Rng rng(991);
    bool never_worse = true;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng.next_below(61);  // <= 64
        std::vector<std::vector<int>> elements;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform01() < 0.08)
                    elements.push_back({static_cast<int>(i), static_cast<int>(j)});
        if (elements.empty()) elements.push_back({0, 1});
        const auto adj = mesh::build_adjacency(n, elements);
        const auto perm = mesh::reverse_cuthill_mckee(adj);
        if (mesh::bandwidth(adj, perm) >
            mesh::bandwidth(adj, mesh::NodePermutation::identity(n)))
            never_worse = false;
    }

    bool within_twice = true;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + rng.next_below(5);  // <= 8
        std::vector<std::vector<int>> elements;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform01() < 0.35)
                    elements.push_back({static_cast<int>(i), static_cast<int>(j)});
        if (elements.empty()) elements.push_back({0, 1});
        const auto adj = mesh::build_adjacency(n, elements);
        const auto perm = mesh::reverse_cuthill_mckee(adj);

        std::vector<int> probe(n);
        std::iota(probe.begin(), probe.end(), 0);
        std::size_t best = n;
        do {
            mesh::NodePermutation p;
            p.perm = probe;
            best = std::min(best, mesh::bandwidth(adj, p));
        } while (std::next_permutation(probe.begin(), probe.end()));
        if (mesh::bandwidth(adj, perm) > 2 * std::max<std::size_t>(best, 1))
            within_twice = false;
    }

    verdict(9, never_worse && within_twice,
            "reordering never exceeds the identity bandwidth and stays within twice the optimum",
            fmt(elapsed_s(t0)) + " s");
}

// ------------------------------------------------- 10: determinism

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism(const std::string& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    // Full pipeline rerun from scratch in a fresh directory with the same
    // seeds; the CSV reports must match byte for byte.
    harness::ExperimentConfig first = desk_config(dir + "/det_a");
    harness::ExperimentConfig second = desk_config(dir + "/det_b");
    for (auto* config : {&first, &second}) {
        std::filesystem::create_directories(std::filesystem::path(config->snapshots_path).parent_path());
        harness::run_experiment(*config);
    }
    const bool gla_equal =
        slurp(first.output_dir + "/gla.csv") == slurp(second.output_dir + "/gla.csv");
    const bool free_equal =
        slurp(first.output_dir + "/freerun.csv") == slurp(second.output_dir + "/freerun.csv");
    verdict(10, gla_equal && free_equal,
            "identical seeds reproduce the report CSVs byte for byte",
            fmt(elapsed_s(t0)) + " s");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string work_dir = argc > 1 ? argv[1] : "acceptance_work";

    criterion_pod();
    criterion_gradients();
    criterion_linear_gaussian();
    criterion_expectation();

    const Stack stack = build_stack(work_dir);
    criterion_surrogate_trends(stack);
    criterion_exact_recovery();
    criteria_gla(stack);
    criterion_rcm();
    criterion_determinism(work_dir);

    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
