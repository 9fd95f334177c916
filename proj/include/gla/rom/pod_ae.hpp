#pragma once

#include <string>
#include <utility>

#include "gla/neural/train.hpp"
#include "gla/rom/pod.hpp"

namespace gla::rom {

/// Two-stage reduction: a prior POD truncation at q', then a dense
/// autoencoder over the POD coefficients down to latent_dim.
struct PodAeModel {
    PodBasis basis;  // truncation q'
    neural::DenseNetwork encoder;
    neural::DenseNetwork decoder;
    std::size_t latent_dim = 0;

    std::size_t qprime() const { return basis.q; }
    std::size_t dof() const { return basis.dof(); }
    void validate() const;
};

struct PodAeOptions {
    std::vector<std::size_t> hidden_widths = {128};
    neural::Activation activation = neural::Activation::leaky_relu(0.3);
};

struct PodAeFit {
    PodAeModel model;
    std::vector<double> loss_history;
};

/// Fits the POD basis at q', encodes the snapshots, and trains the
/// autoencoder on the resulting coefficient vectors with an MSE loss.
PodAeFit fit_pod_ae(const SnapshotMatrix& snapshots, std::size_t qprime, std::size_t latent_dim,
                    const neural::TrainConfig& train_config, const PodAeOptions& options = {});

Vector pod_ae_encode(const PodAeModel& model, const Vector& x);
Vector pod_ae_decode(const PodAeModel& model, const Vector& latent);

/// Encodes every snapshot column; returns one latent state per row.
Matrix pod_ae_encode_all(const PodAeModel& model, const SnapshotMatrix& snapshots);

/// Relative L2 errors of a predicted latent state against the true
/// full-space state: the latent error compares D'(latent) with L^T x in
/// coefficient space, the full error compares L D'(latent) with x. A
/// zero-norm truth yields NaN for the affected ratio.
std::pair<double, double> relative_errors(const PodAeModel& model, const Vector& truth_state,
                                          const Vector& latent_state);

void save_pod_ae(const std::string& dir, const PodAeModel& model);
PodAeModel load_pod_ae(const std::string& dir);

}  // namespace gla::rom
