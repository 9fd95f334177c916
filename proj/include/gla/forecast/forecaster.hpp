#pragma once

#include <string>
#include <vector>

#include "gla/neural/lstm.hpp"
#include "gla/neural/train.hpp"

namespace gla::forecast {

using core::Matrix;
using core::Vector;

/// Shift-by-one training windows over a latent trajectory (one state per
/// row). Inputs hold absolute states, targets hold the following
/// step-to-step increments.
struct WindowedDataset {
    std::vector<Matrix> inputs;   // each l_input x latent
    std::vector<Matrix> targets;  // each l_output x latent
    std::size_t l_input = 0;
    std::size_t l_output = 0;

    std::size_t size() const { return inputs.size(); }
};

WindowedDataset make_windows(const Matrix& series, std::size_t l_input, std::size_t l_output);

/// Sequence-to-sequence incremental surrogate of the latent dynamics: an
/// encoder cell consumes the input window, its final hidden state is fed to
/// the decoder cell at every unrolled step, and a dense head maps decoder
/// states to latent increments.
struct Seq2SeqForecaster {
    neural::LstmCellParams encoder_cell;
    neural::LstmCellParams decoder_cell;
    neural::DenseNetwork head;
    std::size_t l_input = 0;
    std::size_t l_output = 0;
    std::size_t latent_dim = 0;

    // Per-component standardization fitted on training windows; identity
    // until trained.
    Vector input_mean, input_scale;
    Vector target_mean, target_scale;

    void validate() const;
};

Seq2SeqForecaster make_forecaster(std::size_t latent_dim, std::size_t hidden_dim,
                                  std::size_t l_input, std::size_t l_output, core::Rng& rng);

/// Raw head increments (after unscaling) for one input window.
Matrix predict_increments(const Seq2SeqForecaster& model, const Matrix& input);

/// Absolute latent states: increments cumulatively summed from the last
/// input state.
Matrix predict_window(const Seq2SeqForecaster& model, const Matrix& input);

/// Autoregressive continuation: repeatedly feeds its own last l_input
/// states; returns exactly horizon new states (the warmup is not included).
Matrix rollout(const Seq2SeqForecaster& model, const Matrix& warmup, std::size_t horizon);

struct ForecastTrainConfig {
    std::size_t hidden_dim = 32;
    neural::TrainConfig base;
    bool standardize = true;
    /// Every 5th window (index 4 mod 5) is held out, mirroring the
    /// homogeneous 80/20 snapshot split.
    bool holdout_split = true;
};

struct ForecastFit {
    Seq2SeqForecaster model;
    std::vector<double> loss_history;
    double holdout_loss = 0.0;  // scaled-increment MSE on held-out windows
};

ForecastFit train_forecaster(const Matrix& series, std::size_t l_input, std::size_t l_output,
                             const ForecastTrainConfig& config);

void save_forecaster(const std::string& dir, const Seq2SeqForecaster& model);
Seq2SeqForecaster load_forecaster(const std::string& dir);

}  // namespace gla::forecast
