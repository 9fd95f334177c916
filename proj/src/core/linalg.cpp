#include "gla/core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gla::core {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

Eigh jacobi_eigh(const Matrix& sym, int max_sweeps) {
    if (sym.rows != sym.cols) throw std::invalid_argument("jacobi_eigh: matrix not square");
    const std::size_t n = sym.rows;
    Matrix a = sym;
    Matrix v = Matrix::identity(n);
    if (n == 0) return {Vector{}, v};

    const double scale = std::max(frobenius_norm(a), 1e-300);
    const double tol = 1e-15 * scale;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= tol / static_cast<double>(n)) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Vector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    Eigh out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

Svd svd_jacobi(const Matrix& a, int max_sweeps) {
    if (a.rows < a.cols) {
        Svd t = svd_jacobi(transpose(a), max_sweeps);
        return {t.v, t.sigma, t.u};
    }
    const std::size_t m = a.rows, n = a.cols;
    Matrix w = a;  // columns orthogonalized in place
    Matrix v = Matrix::identity(n);
    if (n == 0) return {Matrix(m, 0), Vector{}, Matrix(0, 0)};

    const double eps = 1e-15;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma_pq = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    const double wp = w(k, p), wq = w(k, q);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma_pq += wp * wq;
                }
                if (std::abs(gamma_pq) <= eps * std::sqrt(alpha * beta) || gamma_pq == 0.0)
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma_pq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double wp = w(k, p), wq = w(k, q);
                    w(k, p) = c * wp - s * wq;
                    w(k, q) = s * wp + c * wq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vp = v(k, p), vq = v(k, q);
                    v(k, p) = c * vp - s * vq;
                    v(k, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += w(k, j) * w(k, j);
        sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    Svd out;
    out.sigma.resize(n);
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        const double inv = sigma[src] > 0.0 ? 1.0 / sigma[src] : 0.0;
        for (std::size_t k = 0; k < m; ++k) out.u(k, j) = w(k, src) * inv;
        for (std::size_t k = 0; k < n; ++k) out.v(k, j) = v(k, src);
    }
    return out;
}

Matrix cholesky(const Matrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows;
    Matrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s))
                    throw std::runtime_error("cholesky: matrix not positive definite at row " +
                                             std::to_string(i));
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

Vector forward_substitute(const Matrix& lower, const Vector& b) {
    const std::size_t n = lower.rows;
    if (b.size() != n) throw std::invalid_argument("forward_substitute: size mismatch");
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x[k];
        x[i] = s / lower(i, i);
    }
    return x;
}

Vector backward_substitute(const Matrix& lower, const Vector& b) {
    const std::size_t n = lower.rows;
    if (b.size() != n) throw std::invalid_argument("backward_substitute: size mismatch");
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * x[k];
        x[ii] = s / lower(ii, ii);
    }
    return x;
}

Vector cholesky_solve(const Matrix& chol_lower, const Vector& b) {
    return backward_substitute(chol_lower, forward_substitute(chol_lower, b));
}

namespace {

LeastSquaresResult least_squares_svd(const Matrix& a, const Matrix& b, double rcond) {
    const Svd s = svd_jacobi(a);
    const double cutoff = rcond * (s.sigma.empty() ? 0.0 : s.sigma[0]);
    LeastSquaresResult out;
    out.used_pseudoinverse = true;
    Matrix utb = matmul_tn(s.u, b);  // r x nrhs
    std::size_t rank = 0;
    for (std::size_t i = 0; i < s.sigma.size(); ++i) {
        if (s.sigma[i] > cutoff && s.sigma[i] > 0.0) {
            ++rank;
            for (std::size_t j = 0; j < utb.cols; ++j) utb(i, j) /= s.sigma[i];
        } else {
            for (std::size_t j = 0; j < utb.cols; ++j) utb(i, j) = 0.0;
        }
    }
    out.rank = rank;
    out.solution = matmul(s.v, utb);
    return out;
}

}  // namespace

LeastSquaresResult least_squares(const Matrix& a, const Matrix& b, double rcond) {
    if (a.rows != b.rows) throw std::invalid_argument("least_squares: row mismatch");
    const std::size_t m = a.rows, n = a.cols;
    if (m < n) {
        // Underdetermined full-row-rank systems admit the dual form of the
        // minimum-norm solution, x = A^T (A A^T)^{-1} b, orders of magnitude
        // cheaper than the SVD. Rank deficiency surfaces as a failed
        // Cholesky factorization and falls through to the SVD route.
        try {
            const Matrix chol = cholesky(gram(a));
            LeastSquaresResult out;
            out.rank = m;
            out.used_pseudoinverse = true;
            Matrix w(m, b.cols);
            for (std::size_t c = 0; c < b.cols; ++c)
                w.set_col(c, cholesky_solve(chol, b.col(c)));
            out.solution = matmul_tn(a, w);
            return out;
        } catch (const std::runtime_error&) {
            return least_squares_svd(a, b, rcond);
        }
    }

    // Householder QR, factor and RHS reduced in lockstep.
    Matrix r = a;
    Matrix qtb = b;
    Vector house(m);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t i = j; i < m; ++i) norm += r(i, j) * r(i, j);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = r(j, j) >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i) {
            house[i] = r(i, j);
            if (i == j) house[i] -= alpha;
            vnorm2 += house[i] * house[i];
        }
        if (vnorm2 == 0.0) continue;
        const double inv = 2.0 / vnorm2;
        for (std::size_t c = j; c < n; ++c) {
            double svh = 0.0;
            for (std::size_t i = j; i < m; ++i) svh += house[i] * r(i, c);
            svh *= inv;
            for (std::size_t i = j; i < m; ++i) r(i, c) -= svh * house[i];
        }
        for (std::size_t c = 0; c < qtb.cols; ++c) {
            double svh = 0.0;
            for (std::size_t i = j; i < m; ++i) svh += house[i] * qtb(i, c);
            svh *= inv;
            for (std::size_t i = j; i < m; ++i) qtb(i, c) -= svh * house[i];
        }
        r(j, j) = alpha;
        for (std::size_t i = j + 1; i < m; ++i) r(i, j) = 0.0;
    }

    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(r(j, j));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    if (dmax == 0.0 || dmin <= 1e-10 * dmax) return least_squares_svd(a, b, rcond);

    LeastSquaresResult out;
    out.rank = n;
    out.solution = Matrix(n, b.cols);
    for (std::size_t c = 0; c < b.cols; ++c) {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = qtb(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= r(ii, k) * out.solution(k, c);
            out.solution(ii, c) = s / r(ii, ii);
        }
    }
    return out;
}

}  // namespace gla::core
