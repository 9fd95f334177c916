#pragma once

#include "gla/core/matrix.hpp"

namespace gla::harness {

using core::Matrix;
using core::Vector;

/// Desk-scale synthetic dynamics: 1D viscous Burgers on the periodic unit
/// interval, conservative finite-volume flux u^2/2 with a central viscous
/// term, forward Euler in time.
struct BurgersSpec {
    std::size_t n = 256;
    double viscosity = 0.01;
    double dt = 2.5e-4;
    std::size_t steps = 3996;   // time steps integrated
    std::size_t stride = 4;     // snapshot every this many steps
    enum class InitialCondition { Zero, GaussianBump };
    InitialCondition ic = InitialCondition::GaussianBump;
    double ic_base = 0.15;
    double ic_amplitude = 0.85;
    double ic_center = 0.3;
    double ic_width = 0.06;

    Vector initial_state() const;
    /// Enforces dt <= 0.5 * min(dx/u_max, dx^2/(2 nu)).
    void validate() const;
};

/// Integrates the spec and returns the snapshot ensemble (state at step 0,
/// stride, 2*stride, ...), one snapshot per column. Fails with the step
/// index if the field turns non-finite.
Matrix generate_synthetic_snapshots(const BurgersSpec& spec);

}  // namespace gla::harness
