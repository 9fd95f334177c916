#pragma once

#include "gla/core/matrix.hpp"

namespace gla::core {

/// Eigendecomposition of a symmetric matrix; values sorted non-increasing,
/// vectors stored as columns in the matching order.
struct Eigh {
    Vector values;
    Matrix vectors;
};

/// Cyclic Jacobi rotations; deterministic sweep order, accurate to near
/// machine precision for the matrix sizes this toolkit handles.
Eigh jacobi_eigh(const Matrix& sym, int max_sweeps = 64);

/// Thin SVD a = u * diag(sigma) * v^T with sigma non-increasing.
struct Svd {
    Matrix u;      // m x r
    Vector sigma;  // r = min(m, n)
    Matrix v;      // n x r
};

/// One-sided Jacobi orthogonalization. Works on the transpose internally
/// when m < n.
Svd svd_jacobi(const Matrix& a, int max_sweeps = 64);

/// Lower-triangular Cholesky factor of an SPD matrix; throws
/// std::runtime_error naming the failing pivot otherwise.
Matrix cholesky(const Matrix& a);

/// Solves (L L^T) x = b given the lower factor L.
Vector cholesky_solve(const Matrix& chol_lower, const Vector& b);
Vector forward_substitute(const Matrix& lower, const Vector& b);   // L x = b
Vector backward_substitute(const Matrix& lower, const Vector& b);  // L^T x = b

struct LeastSquaresResult {
    Matrix solution;  // a.cols x b.cols
    std::size_t rank = 0;
    bool used_pseudoinverse = false;
};

/// Multi-RHS linear least squares min ||a x - b||. Householder QR when the
/// system is overdetermined with a well-conditioned triangle; otherwise the
/// SVD pseudoinverse route, which returns the minimum-norm solution for
/// rank-deficient and underdetermined systems.
LeastSquaresResult least_squares(const Matrix& a, const Matrix& b, double rcond = 1e-12);

}  // namespace gla::core
