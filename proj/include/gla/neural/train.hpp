#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gla/neural/network.hpp"

namespace gla::neural {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    enum class Optimizer { Adam, Sgd };
    Optimizer optimizer = Optimizer::Adam;
    std::uint64_t seed = 0;
    std::optional<double> gradient_clip;  // threshold on the global gradient norm

    void validate() const;
};

/// Mutable view of one parameter block and its gradient.
struct ParamView {
    double* value;
    const double* grad;
    std::size_t size;
};

/// Adam (beta1 = 0.9, beta2 = 0.999, eps = 1e-8) or plain SGD over an
/// arbitrary list of parameter blocks. Moment buffers are keyed by block
/// order, which must stay stable across steps.
class Optimizer {
public:
    Optimizer(TrainConfig::Optimizer kind, double learning_rate,
              std::optional<double> gradient_clip);

    void step(std::vector<ParamView> params);

private:
    TrainConfig::Optimizer kind_;
    double lr_;
    std::optional<double> clip_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    std::size_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

struct TrainResult {
    std::vector<double> loss_history;  // mean batch loss per epoch
};

/// Mini-batch MSE training of a dense network; deterministic given the
/// config seed. Throws with the epoch index if the loss turns non-finite.
TrainResult train(DenseNetwork& net, const Matrix& inputs, const Matrix& targets,
                  const TrainConfig& config);

std::vector<ParamView> dense_param_views(DenseNetwork& net, const DenseGradients& grads);

}  // namespace gla::neural
