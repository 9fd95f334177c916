#include "gla/assim/minimize.hpp"

#include <cmath>

namespace gla::assim {

namespace {
constexpr double kArmijoC = 1e-4;
constexpr int kMaxHalvings = 50;
}  // namespace

MinimizeResult minimize(const AssimProblem& problem, const MinimizeOptions& options,
                        const Vector* initial) {
    problem.validate();
    if (options.max_iterations < 1)
        throw std::invalid_argument("minimize: max_iterations must be >= 1");
    if (!(options.grad_tol > 0.0)) throw std::invalid_argument("minimize: grad_tol must be > 0");

    const std::size_t n = problem.background.size();
    MinimizeResult result;
    Vector x = initial ? *initial : problem.background;
    double fx = cost(problem, x);
    Vector g = cost_gradient(problem, x);
    Matrix h_inv = Matrix::identity(n);
    result.cost_trace.push_back(fx);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        result.grad_norm = core::norm2(g);
        if (result.grad_norm <= options.grad_tol) {
            result.converged = true;
            break;
        }

        Vector p = core::scale(core::matvec(h_inv, g), -1.0);
        double gtp = core::dot(g, p);
        if (gtp >= 0.0) {
            // Curvature information went bad; restart from steepest descent.
            h_inv = Matrix::identity(n);
            p = core::scale(g, -1.0);
            gtp = -core::dot(g, g);
        }

        double alpha = 1.0;
        bool accepted = false;
        Vector x_new;
        double f_new = fx;
        for (int ls = 0; ls < kMaxHalvings; ++ls) {
            x_new = x;
            core::axpy(alpha, p, x_new);
            f_new = cost(problem, x_new);
            if (std::isfinite(f_new) && f_new <= fx + kArmijoC * alpha * gtp) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            result.line_search_failed = true;
            break;
        }

        Vector g_new = cost_gradient(problem, x_new);
        const Vector s = core::sub(x_new, x);
        const Vector yk = core::sub(g_new, g);
        const double sy = core::dot(s, yk);
        if (sy > 1e-12 * core::norm2(s) * core::norm2(yk)) {
            // h_inv <- (I - rho s y^T) h_inv (I - rho y s^T) + rho s s^T
            const double rho = 1.0 / sy;
            const Vector hy = core::matvec(h_inv, yk);
            const double yhy = core::dot(yk, hy);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    h_inv(i, j) += (1.0 + rho * yhy) * rho * s[i] * s[j] -
                                   rho * (s[i] * hy[j] + hy[i] * s[j]);
        }

        x = std::move(x_new);
        fx = f_new;
        g = std::move(g_new);
        result.cost_trace.push_back(fx);
    }

    result.grad_norm = core::norm2(g);
    if (result.grad_norm <= options.grad_tol) result.converged = true;
    result.iterations = result.cost_trace.size() - 1;
    result.analysis = std::move(x);
    return result;
}

}  // namespace gla::assim
