#include "gla/rom/pod_ae.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

#include "gla/core/io.hpp"

namespace gla::rom {

void PodAeModel::validate() const {
    encoder.validate();
    decoder.validate();
    if (encoder.input_dim() != qprime())
        throw std::invalid_argument("pod_ae: encoder input width differs from q'");
    if (decoder.output_dim() != qprime())
        throw std::invalid_argument("pod_ae: decoder output width differs from q'");
    if (encoder.output_dim() != latent_dim || decoder.input_dim() != latent_dim)
        throw std::invalid_argument("pod_ae: latent widths do not chain");
}

PodAeFit fit_pod_ae(const SnapshotMatrix& snapshots, std::size_t qprime, std::size_t latent_dim,
                    const neural::TrainConfig& train_config, const PodAeOptions& options) {
    if (latent_dim > qprime)
        throw std::invalid_argument("fit_pod_ae: latent_dim must not exceed q'");
    if (latent_dim < 1) throw std::invalid_argument("fit_pod_ae: latent_dim must be positive");

    PodAeFit fit;
    fit.model.basis = fit_pod(snapshots, qprime);
    fit.model.latent_dim = latent_dim;

    // Coefficient dataset, one sample per row.
    Matrix coeffs(snapshots.cols, qprime);
    for (std::size_t t = 0; t < snapshots.cols; ++t)
        coeffs.set_row(t, pod_encode(fit.model.basis, snapshots.col(t)));

    std::vector<std::size_t> widths;
    widths.push_back(qprime);
    for (std::size_t w : options.hidden_widths) widths.push_back(w);
    widths.push_back(latent_dim);
    for (auto it = options.hidden_widths.rbegin(); it != options.hidden_widths.rend(); ++it)
        widths.push_back(*it);
    widths.push_back(qprime);
    const std::vector<neural::Activation> acts(widths.size() - 1, options.activation);

    core::Rng rng(train_config.seed);
    neural::DenseNetwork ae = neural::make_dense_network(widths, acts, rng);
    const neural::TrainResult tr = neural::train(ae, coeffs, coeffs, train_config);
    fit.loss_history = tr.loss_history;
    if (fit.loss_history.empty())
        throw std::runtime_error("fit_pod_ae: training produced no loss history");

    const std::size_t encoder_layers = options.hidden_widths.size() + 1;
    fit.model.encoder.layers.assign(ae.layers.begin(), ae.layers.begin() + encoder_layers);
    fit.model.decoder.layers.assign(ae.layers.begin() + encoder_layers, ae.layers.end());
    fit.model.validate();
    return fit;
}

Vector pod_ae_encode(const PodAeModel& model, const Vector& x) {
    return model.encoder.forward(pod_encode(model.basis, x));
}

Vector pod_ae_decode(const PodAeModel& model, const Vector& latent) {
    return pod_decode(model.basis, model.decoder.forward(latent));
}

Matrix pod_ae_encode_all(const PodAeModel& model, const SnapshotMatrix& snapshots) {
    Matrix out(snapshots.cols, model.latent_dim);
    core::parallel_for(snapshots.cols, [&](std::size_t t) {
        out.set_row(t, pod_ae_encode(model, snapshots.col(t)));
    });
    return out;
}

std::pair<double, double> relative_errors(const PodAeModel& model, const Vector& truth_state,
                                          const Vector& latent_state) {
    const Vector truth_coeffs = pod_encode(model.basis, truth_state);
    const Vector pred_coeffs = model.decoder.forward(latent_state);
    const double coeff_norm = core::norm2(truth_coeffs);
    const double latent_err =
        coeff_norm > 0.0 ? core::norm2(core::sub(truth_coeffs, pred_coeffs)) / coeff_norm
                         : std::numeric_limits<double>::quiet_NaN();
    const Vector pred_full = pod_decode(model.basis, pred_coeffs);
    const double truth_norm = core::norm2(truth_state);
    const double full_err =
        truth_norm > 0.0 ? core::norm2(core::sub(truth_state, pred_full)) / truth_norm
                         : std::numeric_limits<double>::quiet_NaN();
    return {latent_err, full_err};
}

void save_pod_ae(const std::string& dir, const PodAeModel& model) {
    core::ensure_directory(dir);
    save_pod_basis(dir, model.basis);
    neural::save_dense_network(dir, "encoder", model.encoder);
    neural::save_dense_network(dir, "decoder", model.decoder);
    core::Manifest manifest;
    manifest["latent_dim"] = std::to_string(model.latent_dim);
    core::write_manifest(dir + "/pod_ae_manifest.txt", manifest);
}

PodAeModel load_pod_ae(const std::string& dir) {
    PodAeModel model;
    model.basis = load_pod_basis(dir);
    model.encoder = neural::load_dense_network(dir, "encoder");
    model.decoder = neural::load_dense_network(dir, "decoder");
    model.latent_dim = std::stoul(core::read_manifest(dir + "/pod_ae_manifest.txt").at("latent_dim"));
    model.validate();
    return model;
}

}  // namespace gla::rom
