#pragma once

#include <cstdint>

#include "gla/core/matrix.hpp"

namespace gla::surrogate {

using core::Matrix;
using core::Vector;

/// Latin hypercube design around a center point. Component i is sampled in
/// [c_i - r*s_i, c_i + r*s_i] with s_i = max(|c_i|, scale_floor); each of
/// the count equal-width strata per dimension receives exactly one sample.
struct LhsDesign {
    Vector center;
    double range = 0.3;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
    double scale_floor = 1e-3;

    void validate() const;
};

/// One sample per row, deterministic given the design seed.
Matrix lhs_sample(const LhsDesign& design);

}  // namespace gla::surrogate
