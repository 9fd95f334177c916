#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gla::core {

using Vector = std::vector<double>;

/// Dense row-major matrix. The only container the toolkit uses for
/// two-dimensional numeric data; snapshot ensembles store one state per
/// column, latent trajectories one state per row.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row_ptr(std::size_t i) { return data.data() + i * cols; }
    const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }

    Vector row(std::size_t i) const {
        return Vector(row_ptr(i), row_ptr(i) + cols);
    }
    Vector col(std::size_t j) const {
        Vector out(rows);
        for (std::size_t i = 0; i < rows; ++i) out[i] = (*this)(i, j);
        return out;
    }
    void set_row(std::size_t i, const Vector& v) {
        if (v.size() != cols) throw std::invalid_argument("set_row: width mismatch");
        for (std::size_t j = 0; j < cols; ++j) (*this)(i, j) = v[j];
    }
    void set_col(std::size_t j, const Vector& v) {
        if (v.size() != rows) throw std::invalid_argument("set_col: height mismatch");
        for (std::size_t i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }

    bool empty() const { return rows == 0 || cols == 0; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

bool all_finite(const Matrix& m);
bool all_finite(const Vector& v);

Matrix transpose(const Matrix& a);

// Elementwise and BLAS-1 helpers.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Vector& a, double s);
void axpy(double alpha, const Vector& x, Vector& y);  // y += alpha*x

// Data-parallel kernels. Each output element is owned by exactly one
// iteration, so results are bitwise identical for any thread count and
// match the serial reference in gla::core::serial up to summation order
// (the parallel kernels use the same inner-loop order, keeping them
// bitwise equal as well).
Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix gram(const Matrix& a);                        // a * a^T (symmetric)
Vector matvec(const Matrix& a, const Vector& x);     // a * x
Vector matvec_t(const Matrix& a, const Vector& x);   // a^T * x

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix gram(const Matrix& a);
Vector matvec(const Matrix& a, const Vector& x);
Vector matvec_t(const Matrix& a, const Vector& x);
}  // namespace serial

/// Runs fn(i) for i in [0, n). Iterations must be independent; each index is
/// executed exactly once, so any per-index output is thread-count invariant.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gla::core
