#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gla/rom/pod_ae.hpp"

namespace gla::obsgen {

using core::Matrix;
using core::Vector;

/// Random binary selection operator, stored sparsely as per-row index lists.
/// Entry (i,j) is set independently with probability p; the draw is fixed by
/// the seed and never changes afterwards.
struct SelectionMatrix {
    std::size_t m = 0;  // observation count
    std::size_t n = 0;  // state dof
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::vector<int>> rows;  // sorted column indices per row
};

SelectionMatrix sample_selection_matrix(std::size_t m, std::size_t n, double p,
                                        std::uint64_t seed);

void write_selection_matrix(const std::string& path, const SelectionMatrix& h);
SelectionMatrix read_selection_matrix(const std::string& path);

/// Marginal nonlinearity applied entrywise before row summation.
struct MarginalFn {
    enum class Kind { Quadratic, Reciprocal };
    Kind kind = Kind::Quadratic;
    double offset = 0.5;  // reciprocal: 1 / (x + offset)

    double operator()(double x) const;
    std::string name() const;
    static MarginalFn parse(const std::string& name);
};

/// y(j) = sum over selected entries i of f(x(i)); empty rows give 0. The
/// reciprocal marginal rejects entries within 1e-9 of its pole, reporting
/// the entry index.
Vector apply_full_observation(const SelectionMatrix& h, const MarginalFn& f, const Vector& x);

/// Cross-latent observation operator: encode-observations after
/// select-and-transform after decode-state.
struct LatentObsOperator {
    rom::PodAeModel y_model;
    SelectionMatrix h;
    MarginalFn f;
    rom::PodAeModel x_model;

    std::size_t input_dim() const { return x_model.latent_dim; }
    std::size_t output_dim() const { return y_model.latent_dim; }

    Vector eval(const Vector& latent_state) const;
    /// One sample per row in, one latent observation per row out. Samples
    /// are independent, so evaluation is order-free and runs in parallel.
    Matrix eval_batch(const Matrix& latent_states) const;
};

/// Validates the four-stage width chain at construction.
LatentObsOperator build_latent_obs_operator(rom::PodAeModel y_model, SelectionMatrix h,
                                            MarginalFn f, rom::PodAeModel x_model);

}  // namespace gla::obsgen
