#pragma once

#include "gla/assim/problem.hpp"

namespace gla::assim {

struct MinimizeOptions {
    std::size_t max_iterations = 50;
    double grad_tol = 0.01;
};

struct MinimizeResult {
    Vector analysis;
    std::vector<double> cost_trace;  // J at the initial point and each accepted iterate
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
    bool line_search_failed = false;
};

/// BFGS with an explicit inverse-Hessian update and Armijo backtracking
/// (c = 1e-4, shrink 0.5, at most 50 halvings). Only descent steps are
/// accepted, so the trace is monotone non-increasing and the returned cost
/// never exceeds the starting one. A failed line search returns the best
/// iterate with the warning flag set.
MinimizeResult minimize(const AssimProblem& problem, const MinimizeOptions& options = {},
                        const Vector* initial = nullptr);

}  // namespace gla::assim
