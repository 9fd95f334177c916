#pragma once

#include <cstdint>
#include <set>

#include "gla/assim/minimize.hpp"
#include "gla/forecast/forecaster.hpp"
#include "gla/obsgen/observation.hpp"

namespace gla::assim {

struct ExpectedCostStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t draws = 0;
};

/// Monte Carlo mean of J evaluated at the true state with background and
/// observation errors drawn from the given covariances. With the 1/2
/// convention of the cost this converges to (dim_x + dim_y) / 2 for any SPD
/// pair, which is what callers assert.
ExpectedCostStats expected_cost_check(const Covariance& background_cov,
                                      const Covariance& observation_cov, std::size_t n_mc,
                                      std::uint64_t seed);

/// Same check with random SPD covariances generated from the seed.
ExpectedCostStats expected_cost_check(std::size_t dim_x, std::size_t dim_y, std::size_t n_mc,
                                      std::uint64_t seed);

struct GlaConfig {
    int poly_degree = 4;
    double lhs_range = 0.3;
    std::size_t lhs_count = 1000;
    double lhs_scale_floor = 1e-3;
    std::size_t max_iterations = 50;
    /// Skip threshold on |grad J(x_b)|: the background is accepted as
    /// analysis when already within tolerance.
    double outer_grad_tol = 0.05;
    /// Stopping tolerance of the BFGS iteration itself.
    double optimizer_grad_tol = 0.01;
    /// Refit the polynomial surrogate at every assimilated step; when off,
    /// one fit serves each contiguous burst of scheduled steps.
    bool refit_per_step = true;
    std::uint64_t seed = 0;
    std::set<std::size_t> schedule;  // global step indices with observations
};

struct GlaStepRecord {
    std::size_t step = 0;
    double latent_rel_err = 0.0;
    double full_rel_err = 0.0;
    bool assimilated = false;
    double cost_before = 0.0;    // meaningful only when assimilated
    double cost_after = 0.0;     // meaningful only when assimilated
    std::size_t optimizer_iters = 0;
    bool optimizer_warning = false;
    std::vector<double> cost_trace;  // kept when assimilated, for descent checks
};

struct GlaRunResult {
    Matrix latent_trajectory;  // one state per row, warmup included
    std::vector<GlaStepRecord> records;  // one per predicted step
    std::size_t warmup_len = 0;
};

/// Full assimilation loop over a twin experiment: warm up from encoded
/// truth, free-run the forecaster between observations, and at each
/// scheduled step fit a local polynomial surrogate of the cross-latent
/// operator around the background, minimize the variational cost and
/// restart the forecaster window from the analysis.
GlaRunResult run_gla(const forecast::Seq2SeqForecaster& forecaster,
                     const rom::PodAeModel& state_model, const obsgen::LatentObsOperator& op,
                     const Matrix& truth, const Matrix& observations,
                     const Covariance& background_cov, const Covariance& observation_cov,
                     std::size_t warmup_len, std::size_t horizon, const GlaConfig& config);

}  // namespace gla::assim
