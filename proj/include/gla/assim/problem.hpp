#pragma once

#include "gla/core/linalg.hpp"
#include "gla/core/rng.hpp"
#include "gla/surrogate/polynomial.hpp"

namespace gla::assim {

using core::Matrix;
using core::Vector;

/// SPD error covariance with its Cholesky factor cached at construction;
/// construction rejects asymmetric or non-positive-definite input.
class Covariance {
public:
    /// Unset covariance (dim 0); assemble real ones via the factories.
    Covariance() = default;

    static Covariance from_matrix(Matrix m);
    static Covariance scaled_identity(std::size_t dim, double scale);

    std::size_t dim() const { return matrix_.rows; }
    const Matrix& matrix() const { return matrix_; }
    const Matrix& cholesky_factor() const { return chol_; }

    Vector solve(const Vector& v) const;    // C^{-1} v
    double quad_form(const Vector& v) const;  // v^T C^{-1} v
    Vector sample(core::Rng& rng) const;      // draw from N(0, C)

private:
    Matrix matrix_;
    Matrix chol_;
};

/// One variational assimilation problem in the latent space, with the
/// cross-latent observation operator replaced by its local polynomial
/// surrogate.
struct AssimProblem {
    Vector background;
    Vector observation;
    Covariance background_cov;
    Covariance observation_cov;
    surrogate::PolynomialSurrogate op;

    void validate() const;
};

/// J(x) = 1/2 |x - x_b|^2_{B^-1} + 1/2 |y - H(x)|^2_{R^-1}, evaluated with
/// Cholesky solves. The 1/2 convention is used consistently here and in the
/// gradient.
double cost(const AssimProblem& problem, const Vector& x);

/// grad J = B^{-1}(x - x_b) - Jac^T R^{-1} (y - H(x)) with the exact
/// surrogate Jacobian.
Vector cost_gradient(const AssimProblem& problem, const Vector& x);

}  // namespace gla::assim
