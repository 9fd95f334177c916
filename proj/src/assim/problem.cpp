#include "gla/assim/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace gla::assim {

Covariance Covariance::from_matrix(Matrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("covariance: matrix not square");
    double max_abs = 0.0, max_asym = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            max_abs = std::max(max_abs, std::abs(m(i, j)));
            max_asym = std::max(max_asym, std::abs(m(i, j) - m(j, i)));
        }
    if (max_asym > 1e-12 * std::max(1.0, max_abs))
        throw std::invalid_argument("covariance: matrix not symmetric");
    Covariance c;
    c.chol_ = core::cholesky(m);  // throws when not positive definite
    c.matrix_ = std::move(m);
    return c;
}

Covariance Covariance::scaled_identity(std::size_t dim, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("covariance: scale must be positive");
    Matrix m(dim, dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = scale;
    return from_matrix(std::move(m));
}

Vector Covariance::solve(const Vector& v) const { return core::cholesky_solve(chol_, v); }

double Covariance::quad_form(const Vector& v) const {
    const Vector w = core::forward_substitute(chol_, v);
    return core::dot(w, w);
}

Vector Covariance::sample(core::Rng& rng) const {
    return core::matvec(chol_, rng.normal_vector(dim()));
}

void AssimProblem::validate() const {
    const std::size_t dim_x = background.size();
    const std::size_t dim_y = observation.size();
    if (background_cov.dim() != dim_x)
        throw std::invalid_argument("assim problem: background covariance dimension mismatch");
    if (observation_cov.dim() != dim_y)
        throw std::invalid_argument("assim problem: observation covariance dimension mismatch");
    if (op.input_dim != dim_x || op.output_dim != dim_y)
        throw std::invalid_argument("assim problem: operator dimensions mismatch");
    if (!core::all_finite(background) || !core::all_finite(observation))
        throw std::invalid_argument("assim problem: non-finite data");
}

double cost(const AssimProblem& problem, const Vector& x) {
    if (x.size() != problem.background.size())
        throw std::invalid_argument("cost: dimension mismatch");
    if (!core::all_finite(x)) throw std::invalid_argument("cost: non-finite input");
    const Vector db = core::sub(x, problem.background);
    const Vector dy = core::sub(problem.observation, problem.op.eval(x));
    return 0.5 * problem.background_cov.quad_form(db) +
           0.5 * problem.observation_cov.quad_form(dy);
}

Vector cost_gradient(const AssimProblem& problem, const Vector& x) {
    if (x.size() != problem.background.size())
        throw std::invalid_argument("cost_gradient: dimension mismatch");
    if (!core::all_finite(x)) throw std::invalid_argument("cost_gradient: non-finite input");
    Vector grad = problem.background_cov.solve(core::sub(x, problem.background));
    const Vector innovation = core::sub(problem.observation, problem.op.eval(x));
    const Vector weighted = problem.observation_cov.solve(innovation);
    const Matrix jac = problem.op.jacobian(x);
    const Vector pull = core::matvec_t(jac, weighted);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= pull[i];
    return grad;
}

}  // namespace gla::assim
