#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gla/core/matrix.hpp"

namespace gla::surrogate {

using core::Matrix;
using core::Vector;

/// Multi-indices of total degree <= degree in graded lexicographic order:
/// grade ascending, within a grade lexicographically descending exponent
/// tuples, so dim=2, degree=2 yields 1, a, b, a^2, ab, b^2.
std::vector<std::vector<int>> monomial_exponents(std::size_t dim, int degree);

std::size_t monomial_count(std::size_t dim, int degree);  // C(dim + degree, degree)

Vector monomial_features(const Vector& x, int degree);
Vector monomial_features(const Vector& x, const std::vector<std::vector<int>>& exponents);

/// Multivariate polynomial map fitted by local least squares; smooth by
/// construction, with exact analytic derivatives per monomial.
struct PolynomialSurrogate {
    int degree = 0;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<std::vector<int>> exponents;
    Matrix coefficients;  // output_dim x n_monomials

    Vector eval(const Vector& x) const;
    Matrix jacobian(const Vector& x) const;  // output_dim x input_dim
};

/// Least-squares polynomial fit of sample -> target pairs (one pair per
/// row). The regression runs on internally centered and scaled coordinates
/// for conditioning; the affine map is expanded back into the stored
/// coefficients. Rank-deficient or underdetermined designs resolve to the
/// minimum-coefficient-norm solution of the scaled problem.
PolynomialSurrogate fit_local_polynomial(const Matrix& samples, const Matrix& targets, int degree);

struct SurrogateValidation {
    double rel_rmse = 0.0;
    std::size_t used = 0;
    std::size_t excluded = 0;  // samples where the reference output had zero norm
};

/// sqrt(mean ||ref(x) - s(x)||^2 / ||ref(x)||^2) over the test samples.
SurrogateValidation validate_surrogate(const PolynomialSurrogate& s,
                                       const std::function<Vector(const Vector&)>& reference,
                                       const Matrix& test_samples);

void save_surrogate(const std::string& dir, const PolynomialSurrogate& s);
PolynomialSurrogate load_surrogate(const std::string& dir);

}  // namespace gla::surrogate
