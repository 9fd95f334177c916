#include "gla/surrogate/polynomial.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gla/core/io.hpp"
#include "gla/core/linalg.hpp"

namespace gla::surrogate {

namespace {

void enumerate_grade(std::size_t dim, int remaining, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
    if (current.size() + 1 == dim) {
        current.push_back(remaining);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current.push_back(e);
        enumerate_grade(dim, remaining - e, current, out);
        current.pop_back();
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// Per-dimension powers x^0 .. x^max_degree.
std::vector<Vector> power_table(const Vector& x, int max_degree) {
    std::vector<Vector> pw(x.size(), Vector(static_cast<std::size_t>(max_degree) + 1, 1.0));
    for (std::size_t d = 0; d < x.size(); ++d)
        for (int p = 1; p <= max_degree; ++p) pw[d][p] = pw[d][p - 1] * x[d];
    return pw;
}

}  // namespace

std::vector<std::vector<int>> monomial_exponents(std::size_t dim, int degree) {
    if (dim < 1) throw std::invalid_argument("monomial_exponents: dim must be positive");
    if (degree < 0) throw std::invalid_argument("monomial_exponents: negative degree");
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    for (int g = 0; g <= degree; ++g) enumerate_grade(dim, g, current, out);
    return out;
}

std::size_t monomial_count(std::size_t dim, int degree) {
    // C(dim + degree, degree) computed incrementally.
    std::size_t num = 1;
    for (int i = 1; i <= degree; ++i)
        num = num * (dim + static_cast<std::size_t>(i)) / static_cast<std::size_t>(i);
    return num;
}

Vector monomial_features(const Vector& x, int degree) {
    return monomial_features(x, monomial_exponents(x.size(), degree));
}

Vector monomial_features(const Vector& x, const std::vector<std::vector<int>>& exponents) {
    int max_degree = 0;
    for (const auto& e : exponents)
        for (int v : e) max_degree = std::max(max_degree, v);
    const auto pw = power_table(x, max_degree);
    Vector features(exponents.size());
    for (std::size_t m = 0; m < exponents.size(); ++m) {
        double prod = 1.0;
        for (std::size_t d = 0; d < x.size(); ++d) prod *= pw[d][exponents[m][d]];
        features[m] = prod;
    }
    return features;
}

Vector PolynomialSurrogate::eval(const Vector& x) const {
    if (x.size() != input_dim) throw std::invalid_argument("surrogate eval: dimension mismatch");
    return core::matvec(coefficients, monomial_features(x, exponents));
}

Matrix PolynomialSurrogate::jacobian(const Vector& x) const {
    if (x.size() != input_dim)
        throw std::invalid_argument("surrogate jacobian: dimension mismatch");
    const auto pw = power_table(x, degree);
    Matrix jac(output_dim, input_dim, 0.0);
    for (std::size_t m = 0; m < exponents.size(); ++m) {
        const auto& e = exponents[m];
        for (std::size_t d = 0; d < input_dim; ++d) {
            if (e[d] == 0) continue;
            double term = static_cast<double>(e[d]) * pw[d][e[d] - 1];
            for (std::size_t d2 = 0; d2 < input_dim; ++d2)
                if (d2 != d) term *= pw[d2][e[d2]];
            for (std::size_t o = 0; o < output_dim; ++o) jac(o, d) += coefficients(o, m) * term;
        }
    }
    return jac;
}

PolynomialSurrogate fit_local_polynomial(const Matrix& samples, const Matrix& targets,
                                         int degree) {
    if (samples.rows < 2) throw std::invalid_argument("fit_local_polynomial: need >= 2 samples");
    if (samples.rows != targets.rows)
        throw std::invalid_argument("fit_local_polynomial: sample/target count mismatch");
    if (degree < 1) throw std::invalid_argument("fit_local_polynomial: degree must be >= 1");

    const std::size_t dim = samples.cols;
    PolynomialSurrogate s;
    s.degree = degree;
    s.input_dim = dim;
    s.output_dim = targets.cols;
    s.exponents = monomial_exponents(dim, degree);
    const std::size_t n_mono = s.exponents.size();

    // Centered and scaled regression coordinates.
    Vector center(dim, 0.0), width(dim, 0.0);
    for (std::size_t k = 0; k < samples.rows; ++k)
        for (std::size_t d = 0; d < dim; ++d) center[d] += samples(k, d);
    for (double& c : center) c /= static_cast<double>(samples.rows);
    for (std::size_t k = 0; k < samples.rows; ++k)
        for (std::size_t d = 0; d < dim; ++d)
            width[d] = std::max(width[d], std::abs(samples(k, d) - center[d]));
    for (double& w : width)
        if (w <= 0.0) w = 1.0;

    Matrix design(samples.rows, n_mono);
    core::parallel_for(samples.rows, [&](std::size_t k) {
        Vector z(dim);
        for (std::size_t d = 0; d < dim; ++d) z[d] = (samples(k, d) - center[d]) / width[d];
        design.set_row(k, monomial_features(z, s.exponents));
    });

    const core::LeastSquaresResult solve = core::least_squares(design, targets);
    // solve.solution is n_mono x output_dim in scaled coordinates.

    // Expand each scaled monomial prod_d ((x_d - c_d)/w_d)^a_d into raw
    // x-monomials via the binomial theorem. The scale rule w ~ r*|c| keeps
    // the expansion factors bounded, so no precision is lost here.
    std::map<std::vector<int>, std::size_t> index_of;
    for (std::size_t m = 0; m < n_mono; ++m) index_of[s.exponents[m]] = m;

    s.coefficients = Matrix(s.output_dim, n_mono, 0.0);
    std::vector<int> sub(dim);
    for (std::size_t m = 0; m < n_mono; ++m) {
        const auto& alpha = s.exponents[m];
        double inv_w = 1.0;
        for (std::size_t d = 0; d < dim; ++d)
            for (int p = 0; p < alpha[d]; ++p) inv_w /= width[d];
        // Odometer over all sub-indices k <= alpha.
        std::fill(sub.begin(), sub.end(), 0);
        while (true) {
            double factor = inv_w;
            for (std::size_t d = 0; d < dim; ++d) {
                factor *= binomial(alpha[d], sub[d]);
                const int rest = alpha[d] - sub[d];
                for (int p = 0; p < rest; ++p) factor *= -center[d];
            }
            const std::size_t target_col = index_of.at(sub);
            for (std::size_t o = 0; o < s.output_dim; ++o)
                s.coefficients(o, target_col) += factor * solve.solution(m, o);
            std::size_t d = 0;
            while (d < dim && sub[d] == alpha[d]) {
                sub[d] = 0;
                ++d;
            }
            if (d == dim) break;
            ++sub[d];
        }
    }
    return s;
}

SurrogateValidation validate_surrogate(const PolynomialSurrogate& s,
                                       const std::function<Vector(const Vector&)>& reference,
                                       const Matrix& test_samples) {
    SurrogateValidation report;
    double acc = 0.0;
    for (std::size_t k = 0; k < test_samples.rows; ++k) {
        const Vector x = test_samples.row(k);
        const Vector ref = reference(x);
        const double ref_norm2 = core::dot(ref, ref);
        if (ref_norm2 == 0.0) {
            ++report.excluded;
            continue;
        }
        const Vector err = core::sub(ref, s.eval(x));
        acc += core::dot(err, err) / ref_norm2;
        ++report.used;
    }
    if (report.used > 0) report.rel_rmse = std::sqrt(acc / static_cast<double>(report.used));
    return report;
}

void save_surrogate(const std::string& dir, const PolynomialSurrogate& s) {
    core::ensure_directory(dir);
    Matrix exp(s.exponents.size(), s.input_dim);
    for (std::size_t m = 0; m < s.exponents.size(); ++m)
        for (std::size_t d = 0; d < s.input_dim; ++d)
            exp(m, d) = static_cast<double>(s.exponents[m][d]);
    core::write_matrix(dir + "/surrogate_exponents.txt", exp);
    core::write_matrix(dir + "/surrogate_coefficients.txt", s.coefficients);
    core::Manifest manifest;
    manifest["degree"] = std::to_string(s.degree);
    manifest["input_dim"] = std::to_string(s.input_dim);
    manifest["output_dim"] = std::to_string(s.output_dim);
    core::write_manifest(dir + "/surrogate_manifest.txt", manifest);
}

PolynomialSurrogate load_surrogate(const std::string& dir) {
    PolynomialSurrogate s;
    const auto manifest = core::read_manifest(dir + "/surrogate_manifest.txt");
    s.degree = std::stoi(manifest.at("degree"));
    s.input_dim = std::stoul(manifest.at("input_dim"));
    s.output_dim = std::stoul(manifest.at("output_dim"));
    const Matrix exp = core::read_matrix(dir + "/surrogate_exponents.txt");
    s.exponents.assign(exp.rows, std::vector<int>(exp.cols));
    for (std::size_t m = 0; m < exp.rows; ++m)
        for (std::size_t d = 0; d < exp.cols; ++d)
            s.exponents[m][d] = static_cast<int>(exp(m, d));
    s.coefficients = core::read_matrix(dir + "/surrogate_coefficients.txt");
    return s;
}

}  // namespace gla::surrogate
