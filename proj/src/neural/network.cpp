#include "gla/neural/network.hpp"

#include <cmath>
#include <stdexcept>

#include "gla/core/io.hpp"

namespace gla::neural {

Activation Activation::leaky_relu(double slope) {
    if (!(slope > 0.0 && slope < 1.0))
        throw std::invalid_argument("leaky_relu slope must lie in (0,1)");
    return {Kind::LeakyReLU, slope};
}

double Activation::apply(double pre) const {
    switch (kind) {
        case Kind::Linear: return pre;
        case Kind::ReLU: return pre > 0.0 ? pre : 0.0;
        case Kind::LeakyReLU: return pre > 0.0 ? pre : slope * pre;
        case Kind::Sigmoid: return 1.0 / (1.0 + std::exp(-pre));
        case Kind::Tanh: return std::tanh(pre);
    }
    return pre;
}

double Activation::derivative(double pre) const {
    switch (kind) {
        case Kind::Linear: return 1.0;
        case Kind::ReLU: return pre > 0.0 ? 1.0 : 0.0;
        case Kind::LeakyReLU: return pre > 0.0 ? 1.0 : slope;
        case Kind::Sigmoid: {
            const double s = 1.0 / (1.0 + std::exp(-pre));
            return s * (1.0 - s);
        }
        case Kind::Tanh: {
            const double t = std::tanh(pre);
            return 1.0 - t * t;
        }
    }
    return 1.0;
}

void Activation::apply_inplace(Matrix& m) const {
    for (double& v : m.data) v = apply(v);
}

std::string Activation::name() const {
    switch (kind) {
        case Kind::Linear: return "linear";
        case Kind::ReLU: return "relu";
        case Kind::LeakyReLU: return "leaky_relu:" + core::format_double(slope);
        case Kind::Sigmoid: return "sigmoid";
        case Kind::Tanh: return "tanh";
    }
    return "linear";
}

Activation Activation::parse(const std::string& name) {
    if (name == "linear") return linear();
    if (name == "relu") return relu();
    if (name == "sigmoid") return sigmoid();
    if (name == "tanh") return tanh();
    const std::string prefix = "leaky_relu:";
    if (name.rfind(prefix, 0) == 0) return leaky_relu(std::stod(name.substr(prefix.size())));
    throw std::invalid_argument("unknown activation: " + name);
}

void DenseNetwork::validate() const {
    if (layers.empty()) throw std::invalid_argument("network has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& layer = layers[l];
        if (layer.bias.size() != layer.output_dim())
            throw std::invalid_argument("layer " + std::to_string(l) + ": bias width mismatch");
        if (l > 0 && layer.input_dim() != layers[l - 1].output_dim())
            throw std::invalid_argument("layer " + std::to_string(l) + ": widths do not chain");
        if (!core::all_finite(layer.weights) || !core::all_finite(layer.bias))
            throw std::invalid_argument("layer " + std::to_string(l) + ": non-finite parameters");
    }
}

Vector DenseNetwork::forward(const Vector& x) const {
    if (x.size() != input_dim()) throw std::invalid_argument("forward: input width mismatch");
    Vector h = x;
    for (const auto& layer : layers) {
        Vector pre = core::matvec(layer.weights, h);
        for (std::size_t i = 0; i < pre.size(); ++i)
            pre[i] = layer.activation.apply(pre[i] + layer.bias[i]);
        h = std::move(pre);
    }
    return h;
}

Matrix DenseNetwork::forward_batch(const Matrix& x) const {
    if (x.cols != input_dim()) throw std::invalid_argument("forward_batch: input width mismatch");
    Matrix h = x;
    for (const auto& layer : layers) {
        Matrix pre = core::matmul_nt(h, layer.weights);
        for (std::size_t i = 0; i < pre.rows; ++i)
            for (std::size_t j = 0; j < pre.cols; ++j)
                pre(i, j) = layer.activation.apply(pre(i, j) + layer.bias[j]);
        h = std::move(pre);
    }
    return h;
}

DenseLayer init_dense_layer(std::size_t out, std::size_t in, Activation act, core::Rng& rng) {
    DenseLayer layer;
    layer.weights = Matrix(out, in);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    layer.bias.assign(out, 0.0);
    layer.activation = act;
    return layer;
}

DenseNetwork make_dense_network(const std::vector<std::size_t>& widths,
                                const std::vector<Activation>& activations, core::Rng& rng) {
    if (widths.size() < 2) throw std::invalid_argument("need at least input and output widths");
    if (activations.size() != widths.size() - 1)
        throw std::invalid_argument("one activation per layer required");
    DenseNetwork net;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        net.layers.push_back(init_dense_layer(widths[l + 1], widths[l], activations[l], rng));
    return net;
}

double mse_loss(const Matrix& predictions, const Matrix& targets) {
    if (predictions.rows != targets.rows || predictions.cols != targets.cols)
        throw std::invalid_argument("mse_loss: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.data.size(); ++i) {
        const double r = predictions.data[i] - targets.data[i];
        s += r * r;
    }
    return s / static_cast<double>(predictions.data.size());
}

DenseGradients backprop_gradients(const DenseNetwork& net, const Matrix& inputs,
                                  const Matrix& targets, double* loss_out) {
    if (inputs.rows == 0) throw std::invalid_argument("backprop: empty batch");
    if (inputs.cols != net.input_dim() || targets.cols != net.output_dim() ||
        inputs.rows != targets.rows)
        throw std::invalid_argument("backprop: shape mismatch");

    const std::size_t n_layers = net.layers.size();
    std::vector<Matrix> pre(n_layers);   // pre-activations per layer
    std::vector<Matrix> post(n_layers);  // activations per layer
    Matrix h = inputs;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const auto& layer = net.layers[l];
        Matrix z = core::matmul_nt(h, layer.weights);
        for (std::size_t i = 0; i < z.rows; ++i)
            for (std::size_t j = 0; j < z.cols; ++j) z(i, j) += layer.bias[j];
        if (!core::all_finite(z))
            throw std::runtime_error("backprop: non-finite activations at layer " +
                                     std::to_string(l));
        pre[l] = z;
        layer.activation.apply_inplace(z);
        post[l] = z;
        h = std::move(z);
    }

    const double inv = 1.0 / static_cast<double>(targets.data.size());
    if (loss_out) {
        double s = 0.0;
        for (std::size_t i = 0; i < targets.data.size(); ++i) {
            const double r = post.back().data[i] - targets.data[i];
            s += r * r;
        }
        *loss_out = s * inv;
    }

    // dJ/d(output) for the componentwise-mean squared error.
    Matrix delta(targets.rows, targets.cols);
    for (std::size_t i = 0; i < delta.data.size(); ++i)
        delta.data[i] = 2.0 * inv * (post.back().data[i] - targets.data[i]);

    DenseGradients grads;
    grads.weights.resize(n_layers);
    grads.bias.resize(n_layers);
    for (std::size_t li = n_layers; li-- > 0;) {
        const auto& layer = net.layers[li];
        for (std::size_t i = 0; i < delta.rows; ++i)
            for (std::size_t j = 0; j < delta.cols; ++j)
                delta(i, j) *= layer.activation.derivative(pre[li](i, j));
        const Matrix& layer_in = li == 0 ? inputs : post[li - 1];
        grads.weights[li] = core::matmul_tn(delta, layer_in);  // out x in
        Vector db(layer.output_dim(), 0.0);
        for (std::size_t i = 0; i < delta.rows; ++i)
            for (std::size_t j = 0; j < delta.cols; ++j) db[j] += delta(i, j);
        grads.bias[li] = std::move(db);
        if (li > 0) delta = core::matmul(delta, layer.weights);
    }
    return grads;
}

DenseGradients zero_dense_gradients(const DenseNetwork& net) {
    DenseGradients g;
    for (const auto& layer : net.layers) {
        g.weights.emplace_back(layer.output_dim(), layer.input_dim());
        g.bias.emplace_back(layer.output_dim(), 0.0);
    }
    return g;
}

Matrix dense_forward_cached(const DenseNetwork& net, const Matrix& x, DenseForwardCache& cache) {
    cache.input = x;
    cache.pre.clear();
    cache.post.clear();
    Matrix h = x;
    for (const auto& layer : net.layers) {
        Matrix z = core::matmul_nt(h, layer.weights);
        for (std::size_t i = 0; i < z.rows; ++i)
            for (std::size_t j = 0; j < z.cols; ++j) z(i, j) += layer.bias[j];
        cache.pre.push_back(z);
        layer.activation.apply_inplace(z);
        cache.post.push_back(z);
        h = std::move(z);
    }
    return h;
}

Matrix dense_backward(const DenseNetwork& net, const DenseForwardCache& cache,
                      const Matrix& d_output, DenseGradients& acc) {
    Matrix delta = d_output;
    for (std::size_t li = net.layers.size(); li-- > 0;) {
        const auto& layer = net.layers[li];
        for (std::size_t i = 0; i < delta.rows; ++i)
            for (std::size_t j = 0; j < delta.cols; ++j)
                delta(i, j) *= layer.activation.derivative(cache.pre[li](i, j));
        const Matrix& layer_in = li == 0 ? cache.input : cache.post[li - 1];
        const Matrix gw = core::matmul_tn(delta, layer_in);
        for (std::size_t k = 0; k < gw.data.size(); ++k) acc.weights[li].data[k] += gw.data[k];
        for (std::size_t i = 0; i < delta.rows; ++i)
            for (std::size_t j = 0; j < delta.cols; ++j) acc.bias[li][j] += delta(i, j);
        delta = core::matmul(delta, layer.weights);
    }
    return delta;
}

void save_dense_network(const std::string& dir, const std::string& prefix,
                        const DenseNetwork& net) {
    core::ensure_directory(dir);
    core::Manifest manifest;
    manifest["layers"] = std::to_string(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        const std::string base = dir + "/" + prefix + "_layer" + std::to_string(l);
        core::write_matrix(base + "_w.txt", layer.weights);
        core::write_vector(base + "_b.txt", layer.bias);
        manifest["layer" + std::to_string(l) + "_shape"] =
            std::to_string(layer.output_dim()) + "x" + std::to_string(layer.input_dim());
        manifest["layer" + std::to_string(l) + "_activation"] = layer.activation.name();
    }
    core::write_manifest(dir + "/" + prefix + "_manifest.txt", manifest);
}

DenseNetwork load_dense_network(const std::string& dir, const std::string& prefix) {
    const auto manifest = core::read_manifest(dir + "/" + prefix + "_manifest.txt");
    const std::size_t n_layers = std::stoul(manifest.at("layers"));
    DenseNetwork net;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::string base = dir + "/" + prefix + "_layer" + std::to_string(l);
        DenseLayer layer;
        layer.weights = core::read_matrix(base + "_w.txt");
        layer.bias = core::read_vector(base + "_b.txt");
        layer.activation =
            Activation::parse(manifest.at("layer" + std::to_string(l) + "_activation"));
        net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
}

}  // namespace gla::neural
