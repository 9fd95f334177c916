#pragma once

#include <string>

#include "gla/core/matrix.hpp"

namespace gla::rom {

using core::Matrix;
using core::Vector;

/// Snapshot ensembles store one state vector per column (dof x n_state).
using SnapshotMatrix = Matrix;

/// Truncated orthonormal projection basis fitted from a snapshot ensemble.
struct PodBasis {
    Matrix modes;            // dof x q, orthonormal columns
    Vector singular_values;  // length min(dof, n_state), non-increasing
    std::size_t q = 0;
    std::size_t n_state = 0;
    Vector mean;  // empty unless the basis was fitted with centering

    std::size_t dof() const { return modes.rows; }
    bool centered() const { return !mean.empty(); }
};

/// Which Gram matrix carries the eigenproblem. Auto picks the smaller side;
/// the two explicit choices exist so the routes can be cross-checked.
enum class GramSide { Auto, States, Snapshots };

/// Rank-q orthogonal projection with minimal Frobenius reconstruction error.
/// Snapshots are used raw (no centering) unless center is set.
PodBasis fit_pod(const SnapshotMatrix& snapshots, std::size_t q, GramSide side = GramSide::Auto,
                 bool center = false);

Vector pod_encode(const PodBasis& basis, const Vector& x);
Vector pod_decode(const PodBasis& basis, const Vector& latent);

struct CompressionMetrics {
    double accuracy = 0.0;  // energy fraction captured by the first q values
    double rate = 0.0;      // q / n_state
};

/// accuracy = sum_{i<q} lambda_i^2 / sum_i lambda_i^2 with lambda_i the
/// squared singular values; rate = q / n_state.
CompressionMetrics compression_metrics(const Vector& singular_values, std::size_t q,
                                       std::size_t n_state);
CompressionMetrics compression_metrics(const PodBasis& basis);

void save_pod_basis(const std::string& dir, const PodBasis& basis);
PodBasis load_pod_basis(const std::string& dir);

}  // namespace gla::rom
