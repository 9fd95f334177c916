#include "gla/forecast/forecaster.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gla/core/io.hpp"

namespace gla::forecast {

WindowedDataset make_windows(const Matrix& series, std::size_t l_input, std::size_t l_output) {
    if (l_input < 1 || l_output < 1)
        throw std::invalid_argument("make_windows: window lengths must be positive");
    if (series.rows < l_input + l_output)
        throw std::invalid_argument("make_windows: series shorter than l_input + l_output");

    WindowedDataset ds;
    ds.l_input = l_input;
    ds.l_output = l_output;
    const std::size_t count = series.rows - l_input - l_output + 1;
    for (std::size_t start = 0; start < count; ++start) {
        Matrix in(l_input, series.cols);
        for (std::size_t t = 0; t < l_input; ++t)
            for (std::size_t j = 0; j < series.cols; ++j) in(t, j) = series(start + t, j);
        Matrix tgt(l_output, series.cols);
        for (std::size_t t = 0; t < l_output; ++t) {
            const std::size_t idx = start + l_input + t;
            for (std::size_t j = 0; j < series.cols; ++j)
                tgt(t, j) = series(idx, j) - series(idx - 1, j);
        }
        ds.inputs.push_back(std::move(in));
        ds.targets.push_back(std::move(tgt));
    }
    return ds;
}

void Seq2SeqForecaster::validate() const {
    encoder_cell.validate();
    decoder_cell.validate();
    head.validate();
    if (encoder_cell.input_dim != latent_dim)
        throw std::invalid_argument("forecaster: encoder input width differs from latent dim");
    if (decoder_cell.input_dim != encoder_cell.hidden_dim)
        throw std::invalid_argument("forecaster: decoder must consume the encoder hidden state");
    if (head.input_dim() != decoder_cell.hidden_dim || head.output_dim() != latent_dim)
        throw std::invalid_argument("forecaster: head widths do not chain");
    if (l_input < 1 || l_output < 1)
        throw std::invalid_argument("forecaster: window lengths must be positive");
    if (input_mean.size() != latent_dim || input_scale.size() != latent_dim ||
        target_mean.size() != latent_dim || target_scale.size() != latent_dim)
        throw std::invalid_argument("forecaster: scaler widths differ from latent dim");
}

Seq2SeqForecaster make_forecaster(std::size_t latent_dim, std::size_t hidden_dim,
                                  std::size_t l_input, std::size_t l_output, core::Rng& rng) {
    Seq2SeqForecaster model;
    model.latent_dim = latent_dim;
    model.l_input = l_input;
    model.l_output = l_output;
    model.encoder_cell = neural::init_lstm_cell(hidden_dim, latent_dim, rng);
    model.decoder_cell = neural::init_lstm_cell(hidden_dim, hidden_dim, rng);
    model.head = neural::make_dense_network(
        {hidden_dim, hidden_dim, latent_dim},
        {neural::Activation::relu(), neural::Activation::linear()}, rng);
    model.input_mean.assign(latent_dim, 0.0);
    model.input_scale.assign(latent_dim, 1.0);
    model.target_mean.assign(latent_dim, 0.0);
    model.target_scale.assign(latent_dim, 1.0);
    return model;
}

namespace {

struct ForwardTrace {
    std::vector<neural::LstmStepCache> encoder_steps;
    std::vector<neural::LstmStepCache> decoder_steps;
    std::vector<neural::DenseForwardCache> head_steps;
    std::vector<Matrix> scaled_inputs;  // per time step, batch x latent
    Matrix h_enc;
};

/// Batched forward pass in scaled coordinates; outputs scaled increments
/// per decoder step (each batch x latent).
std::vector<Matrix> forward_scaled(const Seq2SeqForecaster& model,
                                   const std::vector<const Matrix*>& windows,
                                   ForwardTrace* trace) {
    const std::size_t batch = windows.size();
    const std::size_t hid = model.encoder_cell.hidden_dim;

    std::vector<Matrix> xs(model.l_input, Matrix(batch, model.latent_dim));
    for (std::size_t b = 0; b < batch; ++b) {
        const Matrix& w = *windows[b];
        for (std::size_t t = 0; t < model.l_input; ++t)
            for (std::size_t j = 0; j < model.latent_dim; ++j)
                xs[t](b, j) = (w(t, j) - model.input_mean[j]) / model.input_scale[j];
    }

    Matrix h(batch, hid), c(batch, hid);
    for (std::size_t t = 0; t < model.l_input; ++t) {
        neural::LstmStepCache cache;
        Matrix h_next, c_next;
        neural::lstm_step(model.encoder_cell, h, c, xs[t], h_next, c_next,
                          trace ? &cache : nullptr);
        if (trace) trace->encoder_steps.push_back(std::move(cache));
        h = std::move(h_next);
        c = std::move(c_next);
    }
    const Matrix h_enc = h;

    std::vector<Matrix> increments;
    Matrix hd(batch, hid), cd(batch, hid);
    for (std::size_t t = 0; t < model.l_output; ++t) {
        neural::LstmStepCache cache;
        Matrix h_next, c_next;
        neural::lstm_step(model.decoder_cell, hd, cd, h_enc, h_next, c_next,
                          trace ? &cache : nullptr);
        if (trace) trace->decoder_steps.push_back(std::move(cache));
        hd = std::move(h_next);
        cd = std::move(c_next);
        if (trace) {
            neural::DenseForwardCache head_cache;
            increments.push_back(neural::dense_forward_cached(model.head, hd, head_cache));
            trace->head_steps.push_back(std::move(head_cache));
        } else {
            increments.push_back(model.head.forward_batch(hd));
        }
    }
    if (trace) {
        trace->scaled_inputs = std::move(xs);
        trace->h_enc = h_enc;
    }
    return increments;
}

}  // namespace

Matrix predict_increments(const Seq2SeqForecaster& model, const Matrix& input) {
    if (input.rows != model.l_input || input.cols != model.latent_dim)
        throw std::invalid_argument("predict: input window shape mismatch");
    const std::vector<const Matrix*> windows{&input};
    const std::vector<Matrix> scaled = forward_scaled(model, windows, nullptr);
    Matrix out(model.l_output, model.latent_dim);
    for (std::size_t t = 0; t < model.l_output; ++t)
        for (std::size_t j = 0; j < model.latent_dim; ++j)
            out(t, j) = model.target_mean[j] + model.target_scale[j] * scaled[t](0, j);
    return out;
}

Matrix predict_window(const Seq2SeqForecaster& model, const Matrix& input) {
    const Matrix increments = predict_increments(model, input);
    Matrix states(model.l_output, model.latent_dim);
    for (std::size_t j = 0; j < model.latent_dim; ++j) {
        double acc = input(model.l_input - 1, j);
        for (std::size_t t = 0; t < model.l_output; ++t) {
            acc += increments(t, j);
            states(t, j) = acc;
        }
    }
    return states;
}

Matrix rollout(const Seq2SeqForecaster& model, const Matrix& warmup, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("rollout: horizon must be positive");
    if (warmup.rows < model.l_input)
        throw std::invalid_argument("rollout: warmup shorter than l_input");
    if (warmup.cols != model.latent_dim)
        throw std::invalid_argument("rollout: warmup width mismatch");

    Matrix window(model.l_input, model.latent_dim);
    for (std::size_t t = 0; t < model.l_input; ++t)
        for (std::size_t j = 0; j < model.latent_dim; ++j)
            window(t, j) = warmup(warmup.rows - model.l_input + t, j);

    Matrix out(horizon, model.latent_dim);
    std::size_t produced = 0;
    while (produced < horizon) {
        const Matrix states = predict_window(model, window);
        const std::size_t take = std::min<std::size_t>(model.l_output, horizon - produced);
        for (std::size_t t = 0; t < take; ++t)
            for (std::size_t j = 0; j < model.latent_dim; ++j)
                out(produced + t, j) = states(t, j);
        produced += take;
        // New window = last l_input entries of [window, states[0..take)].
        Matrix next(model.l_input, model.latent_dim);
        for (std::size_t t = 0; t < model.l_input; ++t) {
            const std::size_t comb = take + t;
            for (std::size_t j = 0; j < model.latent_dim; ++j)
                next(t, j) =
                    comb < model.l_input ? window(comb, j) : states(comb - model.l_input, j);
        }
        window = std::move(next);
    }
    return out;
}

ForecastFit train_forecaster(const Matrix& series, std::size_t l_input, std::size_t l_output,
                             const ForecastTrainConfig& config) {
    config.base.validate();
    const WindowedDataset ds = make_windows(series, l_input, l_output);

    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        if (config.holdout_split && k % 5 == 4)
            test_idx.push_back(k);
        else
            train_idx.push_back(k);
    }
    if (train_idx.empty()) throw std::invalid_argument("train_forecaster: no training windows");

    core::Rng rng(config.base.seed);
    ForecastFit fit;
    fit.model = make_forecaster(series.cols, config.hidden_dim, l_input, l_output, rng);
    Seq2SeqForecaster& model = fit.model;

    if (config.standardize) {
        // Per-component moments over the training windows.
        auto fit_scaler = [&](bool targets, Vector& mean, Vector& scale) {
            mean.assign(model.latent_dim, 0.0);
            scale.assign(model.latent_dim, 0.0);
            std::size_t count = 0;
            for (std::size_t k : train_idx) {
                const Matrix& m = targets ? ds.targets[k] : ds.inputs[k];
                for (std::size_t t = 0; t < m.rows; ++t)
                    for (std::size_t j = 0; j < m.cols; ++j) mean[j] += m(t, j);
                count += m.rows;
            }
            for (double& v : mean) v /= static_cast<double>(count);
            for (std::size_t k : train_idx) {
                const Matrix& m = targets ? ds.targets[k] : ds.inputs[k];
                for (std::size_t t = 0; t < m.rows; ++t)
                    for (std::size_t j = 0; j < m.cols; ++j) {
                        const double d = m(t, j) - mean[j];
                        scale[j] += d * d;
                    }
            }
            for (double& v : scale) v = std::max(std::sqrt(v / static_cast<double>(count)), 1e-8);
        };
        fit_scaler(false, model.input_mean, model.input_scale);
        fit_scaler(true, model.target_mean, model.target_scale);
    }

    neural::Optimizer opt(config.base.optimizer, config.base.learning_rate,
                          config.base.gradient_clip);
    std::vector<std::size_t> order = train_idx;

    const std::size_t hid = config.hidden_dim;
    for (std::size_t epoch = 0; epoch < config.base.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.base.batch_size) {
            const std::size_t count = std::min(config.base.batch_size, order.size() - start);
            std::vector<const Matrix*> windows(count);
            for (std::size_t b = 0; b < count; ++b) windows[b] = &ds.inputs[order[start + b]];

            ForwardTrace trace;
            const std::vector<Matrix> pred = forward_scaled(model, windows, &trace);

            // Scaled-increment MSE and its output gradients.
            const double denom =
                static_cast<double>(count * model.l_output * model.latent_dim);
            double loss = 0.0;
            std::vector<Matrix> d_pred(model.l_output, Matrix(count, model.latent_dim));
            for (std::size_t t = 0; t < model.l_output; ++t) {
                for (std::size_t b = 0; b < count; ++b) {
                    const Matrix& tgt = ds.targets[order[start + b]];
                    for (std::size_t j = 0; j < model.latent_dim; ++j) {
                        const double scaled_tgt =
                            (tgt(t, j) - model.target_mean[j]) / model.target_scale[j];
                        const double r = pred[t](b, j) - scaled_tgt;
                        loss += r * r;
                        d_pred[t](b, j) = 2.0 * r / denom;
                    }
                }
            }
            loss /= denom;
            if (!std::isfinite(loss))
                throw std::runtime_error("train_forecaster: non-finite loss at epoch " +
                                         std::to_string(epoch));

            // Backward: head + decoder BPTT, fan-in to h_enc, encoder BPTT.
            neural::LstmGradients enc_grads = neural::LstmGradients::zeros(model.encoder_cell);
            neural::LstmGradients dec_grads = neural::LstmGradients::zeros(model.decoder_cell);
            neural::DenseGradients head_grads = neural::zero_dense_gradients(model.head);

            Matrix dh(count, hid, 0.0), dc(count, hid, 0.0), dh_enc(count, hid, 0.0);
            for (std::size_t t = model.l_output; t-- > 0;) {
                Matrix dh_head =
                    neural::dense_backward(model.head, trace.head_steps[t], d_pred[t], head_grads);
                for (std::size_t k = 0; k < dh.data.size(); ++k) dh.data[k] += dh_head.data[k];
                Matrix dh_prev, dc_prev, dx;
                neural::lstm_step_backward(model.decoder_cell, trace.decoder_steps[t], dh, dc,
                                           dec_grads, dh_prev, dc_prev, dx);
                for (std::size_t k = 0; k < dx.data.size(); ++k) dh_enc.data[k] += dx.data[k];
                dh = std::move(dh_prev);
                dc = std::move(dc_prev);
            }
            dh = std::move(dh_enc);
            dc = Matrix(count, hid, 0.0);
            for (std::size_t t = model.l_input; t-- > 0;) {
                Matrix dh_prev, dc_prev, dx;
                neural::lstm_step_backward(model.encoder_cell, trace.encoder_steps[t], dh, dc,
                                           enc_grads, dh_prev, dc_prev, dx);
                dh = std::move(dh_prev);
                dc = std::move(dc_prev);
            }

            std::vector<neural::ParamView> views;
            auto add_cell = [&](neural::LstmCellParams& cell, neural::LstmGradients& g) {
                views.push_back({cell.w_forget.data.data(), g.w_forget.data.data(),
                                 cell.w_forget.data.size()});
                views.push_back(
                    {cell.w_input.data.data(), g.w_input.data.data(), cell.w_input.data.size()});
                views.push_back(
                    {cell.w_cell.data.data(), g.w_cell.data.data(), cell.w_cell.data.size()});
                views.push_back({cell.w_output.data.data(), g.w_output.data.data(),
                                 cell.w_output.data.size()});
                views.push_back({cell.b_forget.data(), g.b_forget.data(), cell.b_forget.size()});
                views.push_back({cell.b_input.data(), g.b_input.data(), cell.b_input.size()});
                views.push_back({cell.b_cell.data(), g.b_cell.data(), cell.b_cell.size()});
                views.push_back({cell.b_output.data(), g.b_output.data(), cell.b_output.size()});
            };
            add_cell(model.encoder_cell, enc_grads);
            add_cell(model.decoder_cell, dec_grads);
            for (auto v : neural::dense_param_views(model.head, head_grads)) views.push_back(v);
            opt.step(std::move(views));

            epoch_loss += loss;
            ++n_batches;
        }
        fit.loss_history.push_back(epoch_loss / static_cast<double>(n_batches));
    }

    if (!test_idx.empty()) {
        std::vector<const Matrix*> windows(test_idx.size());
        for (std::size_t b = 0; b < test_idx.size(); ++b) windows[b] = &ds.inputs[test_idx[b]];
        const std::vector<Matrix> pred = forward_scaled(model, windows, nullptr);
        double loss = 0.0;
        for (std::size_t t = 0; t < model.l_output; ++t)
            for (std::size_t b = 0; b < test_idx.size(); ++b) {
                const Matrix& tgt = ds.targets[test_idx[b]];
                for (std::size_t j = 0; j < model.latent_dim; ++j) {
                    const double scaled_tgt =
                        (tgt(t, j) - model.target_mean[j]) / model.target_scale[j];
                    const double r = pred[t](b, j) - scaled_tgt;
                    loss += r * r;
                }
            }
        fit.holdout_loss =
            loss / static_cast<double>(test_idx.size() * model.l_output * model.latent_dim);
    }
    return fit;
}

void save_forecaster(const std::string& dir, const Seq2SeqForecaster& model) {
    core::ensure_directory(dir);
    neural::save_lstm_cell(dir, "encoder_cell", model.encoder_cell);
    neural::save_lstm_cell(dir, "decoder_cell", model.decoder_cell);
    neural::save_dense_network(dir, "head", model.head);
    core::write_vector(dir + "/input_mean.txt", model.input_mean);
    core::write_vector(dir + "/input_scale.txt", model.input_scale);
    core::write_vector(dir + "/target_mean.txt", model.target_mean);
    core::write_vector(dir + "/target_scale.txt", model.target_scale);
    core::Manifest manifest;
    manifest["l_input"] = std::to_string(model.l_input);
    manifest["l_output"] = std::to_string(model.l_output);
    manifest["latent_dim"] = std::to_string(model.latent_dim);
    core::write_manifest(dir + "/forecaster_manifest.txt", manifest);
}

Seq2SeqForecaster load_forecaster(const std::string& dir) {
    Seq2SeqForecaster model;
    model.encoder_cell = neural::load_lstm_cell(dir, "encoder_cell");
    model.decoder_cell = neural::load_lstm_cell(dir, "decoder_cell");
    model.head = neural::load_dense_network(dir, "head");
    model.input_mean = core::read_vector(dir + "/input_mean.txt");
    model.input_scale = core::read_vector(dir + "/input_scale.txt");
    model.target_mean = core::read_vector(dir + "/target_mean.txt");
    model.target_scale = core::read_vector(dir + "/target_scale.txt");
    const auto manifest = core::read_manifest(dir + "/forecaster_manifest.txt");
    model.l_input = std::stoul(manifest.at("l_input"));
    model.l_output = std::stoul(manifest.at("l_output"));
    model.latent_dim = std::stoul(manifest.at("latent_dim"));
    model.validate();
    return model;
}

}  // namespace gla::forecast
