#include "gla/rom/pod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gla/core/io.hpp"
#include "gla/core/linalg.hpp"

namespace gla::rom {

namespace {

/// Fixes each mode's sign so that its largest-magnitude entry is positive;
/// makes the two Gram routes produce identical bases.
void canonicalize_signs(Matrix& modes) {
    for (std::size_t j = 0; j < modes.cols; ++j) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < modes.rows; ++i) {
            const double a = std::abs(modes(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (modes(arg, j) < 0.0)
            for (std::size_t i = 0; i < modes.rows; ++i) modes(i, j) = -modes(i, j);
    }
}

/// Orthonormalizes columns in place (modified Gram-Schmidt, two passes).
void reorthonormalize(Matrix& m) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < m.rows; ++i) proj += m(i, k) * m(i, j);
                for (std::size_t i = 0; i < m.rows; ++i) m(i, j) -= proj * m(i, k);
            }
            double norm = 0.0;
            for (std::size_t i = 0; i < m.rows; ++i) norm += m(i, j) * m(i, j);
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (std::size_t i = 0; i < m.rows; ++i) m(i, j) /= norm;
        }
    }
}

/// Deterministic completion of rank-deficient ensembles: fills column j and
/// onwards with canonical basis vectors orthogonalized against the existing
/// modes. The extra modes carry no data energy, so reconstructions are
/// unaffected.
void complete_basis(Matrix& modes, std::size_t from) {
    std::size_t next_axis = 0;
    for (std::size_t j = from; j < modes.cols; ++j) {
        while (next_axis < modes.rows) {
            Vector cand(modes.rows, 0.0);
            cand[next_axis] = 1.0;
            ++next_axis;
            for (std::size_t k = 0; k < j; ++k) {
                double proj = 0.0;
                for (std::size_t i = 0; i < modes.rows; ++i) proj += modes(i, k) * cand[i];
                for (std::size_t i = 0; i < modes.rows; ++i) cand[i] -= proj * modes(i, k);
            }
            const double norm = core::norm2(cand);
            if (norm > 0.5) {
                for (std::size_t i = 0; i < modes.rows; ++i) modes(i, j) = cand[i] / norm;
                break;
            }
        }
        if (next_axis > modes.rows)
            throw std::runtime_error("fit_pod: unable to complete basis");
    }
}

}  // namespace

PodBasis fit_pod(const SnapshotMatrix& snapshots, std::size_t q, GramSide side, bool center) {
    const std::size_t dof = snapshots.rows, n_state = snapshots.cols;
    if (n_state < 2) throw std::invalid_argument("fit_pod: need at least 2 snapshots");
    if (!core::all_finite(snapshots))
        throw std::invalid_argument("fit_pod: snapshots contain non-finite entries");
    if (q < 1 || q > std::min(dof, n_state))
        throw std::invalid_argument("fit_pod: q out of range");

    Matrix x = snapshots;
    Vector mean;
    if (center) {
        mean.assign(dof, 0.0);
        for (std::size_t i = 0; i < dof; ++i) {
            double s = 0.0;
            for (std::size_t t = 0; t < n_state; ++t) s += x(i, t);
            mean[i] = s / static_cast<double>(n_state);
            for (std::size_t t = 0; t < n_state; ++t) x(i, t) -= mean[i];
        }
    }
    if (core::frobenius_norm(x) == 0.0)
        throw std::invalid_argument("fit_pod: degenerate all-zero snapshot ensemble");

    if (side == GramSide::Auto) side = dof <= n_state ? GramSide::States : GramSide::Snapshots;

    const std::size_t spectrum_len = std::min(dof, n_state);
    PodBasis basis;
    basis.q = q;
    basis.n_state = n_state;
    basis.mean = std::move(mean);
    basis.singular_values.assign(spectrum_len, 0.0);

    if (side == GramSide::States) {
        // Eigenvectors of X X^T are the modes directly.
        const core::Eigh eig = core::jacobi_eigh(core::gram(x));
        for (std::size_t i = 0; i < spectrum_len; ++i)
            basis.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
        basis.modes = Matrix(dof, q);
        for (std::size_t j = 0; j < q; ++j)
            for (std::size_t i = 0; i < dof; ++i) basis.modes(i, j) = eig.vectors(i, j);
    } else {
        // Method of snapshots: modes are X v / sigma from the X^T X problem.
        const core::Eigh eig = core::jacobi_eigh(core::matmul_tn(x, x));
        for (std::size_t i = 0; i < spectrum_len; ++i)
            basis.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
        const double tol =
            basis.singular_values.empty() ? 0.0 : 1e-12 * basis.singular_values[0];
        basis.modes = Matrix(dof, q);
        std::size_t numerically_valid = q;
        for (std::size_t j = 0; j < q; ++j) {
            const double sigma = j < spectrum_len ? basis.singular_values[j] : 0.0;
            if (sigma <= tol) {
                numerically_valid = j;
                break;
            }
            Vector vj(n_state);
            for (std::size_t t = 0; t < n_state; ++t) vj[t] = eig.vectors(t, j);
            const Vector uj = core::matvec(x, vj);
            for (std::size_t i = 0; i < dof; ++i) basis.modes(i, j) = uj[i] / sigma;
        }
        reorthonormalize(basis.modes);
        if (numerically_valid < q) complete_basis(basis.modes, numerically_valid);
    }
    canonicalize_signs(basis.modes);
    return basis;
}

Vector pod_encode(const PodBasis& basis, const Vector& x) {
    if (x.size() != basis.dof()) throw std::invalid_argument("pod_encode: dimension mismatch");
    if (!basis.centered()) return core::matvec_t(basis.modes, x);
    return core::matvec_t(basis.modes, core::sub(x, basis.mean));
}

Vector pod_decode(const PodBasis& basis, const Vector& latent) {
    if (latent.size() != basis.q) throw std::invalid_argument("pod_decode: dimension mismatch");
    Vector x = core::matvec(basis.modes, latent);
    if (basis.centered()) x = core::add(x, basis.mean);
    return x;
}

CompressionMetrics compression_metrics(const Vector& singular_values, std::size_t q,
                                       std::size_t n_state) {
    if (singular_values.empty()) throw std::invalid_argument("compression_metrics: empty spectrum");
    if (q > singular_values.size())
        throw std::invalid_argument("compression_metrics: q exceeds spectrum length");
    if (n_state == 0) throw std::invalid_argument("compression_metrics: n_state must be positive");
    double head = 0.0, total = 0.0;
    for (std::size_t i = 0; i < singular_values.size(); ++i) {
        const double lambda = singular_values[i] * singular_values[i];
        const double energy = lambda * lambda;
        total += energy;
        if (i < q) head += energy;
    }
    CompressionMetrics m;
    m.accuracy = total > 0.0 ? head / total : 0.0;
    m.rate = static_cast<double>(q) / static_cast<double>(n_state);
    return m;
}

CompressionMetrics compression_metrics(const PodBasis& basis) {
    return compression_metrics(basis.singular_values, basis.q, basis.n_state);
}

void save_pod_basis(const std::string& dir, const PodBasis& basis) {
    core::ensure_directory(dir);
    core::write_matrix(dir + "/pod_modes.txt", basis.modes);
    core::write_vector(dir + "/pod_spectrum.txt", basis.singular_values);
    if (basis.centered()) core::write_vector(dir + "/pod_mean.txt", basis.mean);
    core::Manifest manifest;
    manifest["q"] = std::to_string(basis.q);
    manifest["n_state"] = std::to_string(basis.n_state);
    manifest["centered"] = basis.centered() ? "1" : "0";
    core::write_manifest(dir + "/pod_manifest.txt", manifest);
}

PodBasis load_pod_basis(const std::string& dir) {
    const auto manifest = core::read_manifest(dir + "/pod_manifest.txt");
    PodBasis basis;
    basis.modes = core::read_matrix(dir + "/pod_modes.txt");
    basis.singular_values = core::read_vector(dir + "/pod_spectrum.txt");
    basis.q = std::stoul(manifest.at("q"));
    basis.n_state = std::stoul(manifest.at("n_state"));
    if (manifest.at("centered") == "1") basis.mean = core::read_vector(dir + "/pod_mean.txt");
    return basis;
}

}  // namespace gla::rom
