#include "gla/core/matrix.hpp"

#include <cmath>

namespace gla::core {

namespace {
// Below this many output elements the parallel kernels stay serial; the
// fork/join overhead dominates on small operands.
constexpr std::size_t kParallelThreshold = 16 * 1024;

void check_inner(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
}  // namespace

bool all_finite(const Matrix& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double dot(const Vector& a, const Vector& b) {
    check_inner(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

Vector add(const Vector& a, const Vector& b) {
    check_inner(a.size(), b.size(), "add");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector sub(const Vector& a, const Vector& b) {
    check_inner(a.size(), b.size(), "sub");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector scale(const Vector& a, double s) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

void axpy(double alpha, const Vector& x, Vector& y) {
    check_inner(x.size(), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

namespace detail {

// Shared row kernels: one output row per call, identical inner-loop order
// for the serial and parallel entry points.

inline void matmul_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
        const double aik = ai[k];
        const double* bk = b.row_ptr(k);
        for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
}

inline void matmul_tn_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
    // c(i,:) = sum_k a(k,i) * b(k,:)
    double* ci = c.row_ptr(i);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double aki = a(k, i);
        const double* bk = b.row_ptr(k);
        for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aki * bk[j];
    }
}

inline void matmul_nt_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
        const double* bj = b.row_ptr(j);
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * bj[k];
        ci[j] = s;
    }
}

inline void gram_row(const Matrix& a, Matrix& g, std::size_t i) {
    const double* ai = a.row_ptr(i);
    for (std::size_t j = 0; j <= i; ++j) {
        const double* aj = a.row_ptr(j);
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * aj[k];
        g(i, j) = s;
    }
}

}  // namespace detail

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols, 0.0);
    const std::size_t work = a.rows * b.cols;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
    for (long long i = 0; i < static_cast<long long>(a.rows); ++i)
        detail::matmul_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_tn");
    Matrix c(a.cols, b.cols, 0.0);
    const std::size_t work = a.cols * b.cols;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
    for (long long i = 0; i < static_cast<long long>(a.cols); ++i)
        detail::matmul_tn_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_nt");
    Matrix c(a.rows, b.rows, 0.0);
    const std::size_t work = a.rows * b.rows;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
    for (long long i = 0; i < static_cast<long long>(a.rows); ++i)
        detail::matmul_nt_row(a, b, c, static_cast<std::size_t>(i));
    return c;
}

Matrix gram(const Matrix& a) {
    Matrix g(a.rows, a.rows, 0.0);
    const std::size_t work = a.rows * a.rows;
#pragma omp parallel for schedule(static) if (work > kParallelThreshold)
    for (long long i = 0; i < static_cast<long long>(a.rows); ++i)
        detail::gram_row(a, g, static_cast<std::size_t>(i));
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.rows; ++j) g(i, j) = g(j, i);
    return g;
}

Vector matvec(const Matrix& a, const Vector& x) {
    check_inner(a.cols, x.size(), "matvec");
    Vector y(a.rows, 0.0);
#pragma omp parallel for schedule(static) if (a.rows * a.cols > kParallelThreshold)
    for (long long i = 0; i < static_cast<long long>(a.rows); ++i) {
        const double* ai = a.row_ptr(static_cast<std::size_t>(i));
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * x[k];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
    check_inner(a.rows, x.size(), "matvec_t");
    Vector y(a.cols, 0.0);
#pragma omp parallel for schedule(static) if (a.rows * a.cols > kParallelThreshold)
    for (long long j = 0; j < static_cast<long long>(a.cols); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.rows; ++k) s += a(k, static_cast<std::size_t>(j)) * x[k];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
#pragma omp parallel for schedule(static) if (n > 1)
    for (long long i = 0; i < static_cast<long long>(n); ++i) fn(static_cast<std::size_t>(i));
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.rows, "matmul");
    Matrix c(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) detail::matmul_row(a, b, c, i);
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_inner(a.rows, b.rows, "matmul_tn");
    Matrix c(a.cols, b.cols, 0.0);
    for (std::size_t i = 0; i < a.cols; ++i) detail::matmul_tn_row(a, b, c, i);
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols, b.cols, "matmul_nt");
    Matrix c(a.rows, b.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) detail::matmul_nt_row(a, b, c, i);
    return c;
}

Matrix gram(const Matrix& a) {
    Matrix g(a.rows, a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) detail::gram_row(a, g, i);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.rows; ++j) g(i, j) = g(j, i);
    return g;
}

Vector matvec(const Matrix& a, const Vector& x) {
    check_inner(a.cols, x.size(), "matvec");
    Vector y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* ai = a.row_ptr(i);
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * x[k];
        y[i] = s;
    }
    return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
    check_inner(a.rows, x.size(), "matvec_t");
    Vector y(a.cols, 0.0);
    for (std::size_t j = 0; j < a.cols; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.rows; ++k) s += a(k, j) * x[k];
        y[j] = s;
    }
    return y;
}

}  // namespace serial

}  // namespace gla::core
