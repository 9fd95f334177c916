#include "gla/neural/train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gla/core/rng.hpp"

namespace gla::neural {

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

Optimizer::Optimizer(TrainConfig::Optimizer kind, double learning_rate,
                     std::optional<double> gradient_clip)
    : kind_(kind), lr_(learning_rate), clip_(gradient_clip) {}

void Optimizer::step(std::vector<ParamView> params) {
    double clip_scale = 1.0;
    if (clip_) {
        double norm2 = 0.0;
        for (const auto& p : params)
            for (std::size_t i = 0; i < p.size; ++i) norm2 += p.grad[i] * p.grad[i];
        const double norm = std::sqrt(norm2);
        if (norm > *clip_ && norm > 0.0) clip_scale = *clip_ / norm;
    }

    if (kind_ == TrainConfig::Optimizer::Sgd) {
        for (const auto& p : params)
            for (std::size_t i = 0; i < p.size; ++i) p.value[i] -= lr_ * clip_scale * p.grad[i];
        return;
    }

    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(p.size, 0.0);
            v_.emplace_back(p.size, 0.0);
        }
    }
    if (m_.size() != params.size()) throw std::logic_error("optimizer: parameter blocks changed");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& p = params[b];
        if (m_[b].size() != p.size) throw std::logic_error("optimizer: block size changed");
        for (std::size_t i = 0; i < p.size; ++i) {
            const double g = clip_scale * p.grad[i];
            m_[b][i] = beta1_ * m_[b][i] + (1.0 - beta1_) * g;
            v_[b][i] = beta2_ * v_[b][i] + (1.0 - beta2_) * g * g;
            const double mhat = m_[b][i] / bc1;
            const double vhat = v_[b][i] / bc2;
            p.value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

std::vector<ParamView> dense_param_views(DenseNetwork& net, const DenseGradients& grads) {
    std::vector<ParamView> views;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        views.push_back({net.layers[l].weights.data.data(), grads.weights[l].data.data(),
                         net.layers[l].weights.data.size()});
        views.push_back(
            {net.layers[l].bias.data(), grads.bias[l].data(), net.layers[l].bias.size()});
    }
    return views;
}

TrainResult train(DenseNetwork& net, const Matrix& inputs, const Matrix& targets,
                  const TrainConfig& config) {
    config.validate();
    net.validate();
    if (inputs.rows == 0) throw std::invalid_argument("train: empty dataset");
    if (inputs.rows != targets.rows) throw std::invalid_argument("train: sample count mismatch");

    core::Rng rng(config.seed);
    Optimizer opt(config.optimizer, config.learning_rate, config.gradient_clip);
    std::vector<std::size_t> order(inputs.rows);
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, order.size() - start);
            Matrix bx(count, inputs.cols), bt(count, targets.cols);
            for (std::size_t r = 0; r < count; ++r) {
                const std::size_t src = order[start + r];
                for (std::size_t j = 0; j < inputs.cols; ++j) bx(r, j) = inputs(src, j);
                for (std::size_t j = 0; j < targets.cols; ++j) bt(r, j) = targets(src, j);
            }
            double loss = 0.0;
            DenseGradients grads = backprop_gradients(net, bx, bt, &loss);
            if (!std::isfinite(loss))
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch));
            opt.step(dense_param_views(net, grads));
            epoch_loss += loss;
            ++n_batches;
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(n_batches));
    }
    return result;
}

}  // namespace gla::neural
