#pragma once

#include <string>
#include <vector>

#include "gla/core/matrix.hpp"
#include "gla/core/rng.hpp"

namespace gla::neural {

using core::Matrix;
using core::Vector;

struct Activation {
    enum class Kind { Linear, ReLU, LeakyReLU, Sigmoid, Tanh };

    Kind kind = Kind::Linear;
    double slope = 0.0;  // LeakyReLU only, must lie in (0,1)

    static Activation linear() { return {Kind::Linear, 0.0}; }
    static Activation relu() { return {Kind::ReLU, 0.0}; }
    static Activation leaky_relu(double slope);
    static Activation sigmoid() { return {Kind::Sigmoid, 0.0}; }
    static Activation tanh() { return {Kind::Tanh, 0.0}; }

    double apply(double pre) const;
    double derivative(double pre) const;
    void apply_inplace(Matrix& m) const;

    std::string name() const;
    static Activation parse(const std::string& name);
};

struct DenseLayer {
    Matrix weights;  // out x in
    Vector bias;     // out
    Activation activation;

    std::size_t input_dim() const { return weights.cols; }
    std::size_t output_dim() const { return weights.rows; }
};

/// Plain fully connected feed-forward network; layer widths must chain.
struct DenseNetwork {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return layers.front().input_dim(); }
    std::size_t output_dim() const { return layers.back().output_dim(); }
    void validate() const;

    Vector forward(const Vector& x) const;
    /// Batch forward, one sample per row.
    Matrix forward_batch(const Matrix& x) const;
};

/// Glorot-uniform initialization, +-sqrt(6/(fan_in+fan_out)).
DenseLayer init_dense_layer(std::size_t out, std::size_t in, Activation act, core::Rng& rng);
DenseNetwork make_dense_network(const std::vector<std::size_t>& widths,
                                const std::vector<Activation>& activations, core::Rng& rng);

struct DenseGradients {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;
};

/// Gradients of the mean squared error (mean over samples and output
/// components) with respect to every parameter. Throws with the layer index
/// if an activation turns non-finite.
DenseGradients backprop_gradients(const DenseNetwork& net, const Matrix& inputs,
                                  const Matrix& targets, double* loss_out = nullptr);

DenseGradients zero_dense_gradients(const DenseNetwork& net);

/// Forward pass keeping the per-layer activations needed for a backward
/// pass driven by an external output gradient.
struct DenseForwardCache {
    Matrix input;
    std::vector<Matrix> pre;
    std::vector<Matrix> post;
};
Matrix dense_forward_cached(const DenseNetwork& net, const Matrix& x, DenseForwardCache& cache);

/// Backward pass from dLoss/dOutput; parameter gradients accumulate into
/// acc, the gradient with respect to the input batch is returned.
Matrix dense_backward(const DenseNetwork& net, const DenseForwardCache& cache,
                      const Matrix& d_output, DenseGradients& acc);

double mse_loss(const Matrix& predictions, const Matrix& targets);

// Per-layer parameter files in the shared matrix format plus a manifest of
// shapes and activations.
void save_dense_network(const std::string& dir, const std::string& prefix,
                        const DenseNetwork& net);
DenseNetwork load_dense_network(const std::string& dir, const std::string& prefix);

}  // namespace gla::neural
