#include "gla/harness/burgers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gla::harness {

Vector BurgersSpec::initial_state() const {
    Vector u(n, 0.0);
    if (ic == InitialCondition::Zero) return u;
    const double dx = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + 0.5) * dx;
        // Nearest periodic image of the bump center.
        double d = std::abs(x - ic_center);
        d = std::min(d, 1.0 - d);
        u[i] = ic_base + ic_amplitude * std::exp(-d * d / (2.0 * ic_width * ic_width));
    }
    return u;
}

void BurgersSpec::validate() const {
    if (n < 4) throw std::invalid_argument("burgers: need at least 4 cells");
    if (!(viscosity > 0.0)) throw std::invalid_argument("burgers: viscosity must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("burgers: dt must be positive");
    if (steps < 1 || stride < 1 || steps % stride != 0)
        throw std::invalid_argument("burgers: steps must be a positive multiple of stride");
    const double dx = 1.0 / static_cast<double>(n);
    double u_max = 1e-6;
    for (double v : initial_state()) u_max = std::max(u_max, std::abs(v));
    const double limit = 0.5 * std::min(dx / u_max, dx * dx / (2.0 * viscosity));
    if (dt > limit)
        throw std::invalid_argument("burgers: dt violates the stability bound " +
                                    std::to_string(limit));
}

Matrix generate_synthetic_snapshots(const BurgersSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n;
    const double dx = 1.0 / static_cast<double>(n);
    const double inv_dx = 1.0 / dx;
    const double visc_coeff = spec.viscosity * inv_dx * inv_dx;

    Vector u = spec.initial_state();
    Vector flux(n), next(n);
    const std::size_t n_snapshots = spec.steps / spec.stride + 1;
    Matrix snapshots(n, n_snapshots);
    snapshots.set_col(0, u);

    for (std::size_t step = 1; step <= spec.steps; ++step) {
        // Interface flux at i+1/2: average of the cell fluxes u^2/2.
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ip = i + 1 == n ? 0 : i + 1;
            flux[i] = 0.25 * (u[i] * u[i] + u[ip] * u[ip]);
        }
        core::parallel_for(n, [&](std::size_t i) {
            const std::size_t im = i == 0 ? n - 1 : i - 1;
            const std::size_t ip = i + 1 == n ? 0 : i + 1;
            const double advection = (flux[i] - flux[im]) * inv_dx;
            const double diffusion = visc_coeff * (u[ip] - 2.0 * u[i] + u[im]);
            next[i] = u[i] + spec.dt * (diffusion - advection);
        });
        std::swap(u, next);
        if (step % spec.stride == 0) {
            for (double v : u)
                if (!std::isfinite(v))
                    throw std::runtime_error("burgers: instability detected at step " +
                                             std::to_string(step));
            snapshots.set_col(step / spec.stride, u);
        }
    }
    return snapshots;
}

}  // namespace gla::harness
