#include "doctest.h"

#include <cmath>
#include <map>

#include "gla/obsgen/observation.hpp"
#include "support/oracles.hpp"

using namespace gla;
using core::Matrix;
using core::Vector;
using obsgen::MarginalFn;

namespace {

/// POD-AE whose encode and decode are exact identities at dimension n
/// (identity basis, single identity linear layers).
rom::PodAeModel identity_model(std::size_t n) {
    rom::PodAeModel model;
    model.basis.modes = Matrix::identity(n);
    model.basis.singular_values = Vector(n, 1.0);
    model.basis.q = n;
    model.basis.n_state = n;
    model.latent_dim = n;
    neural::DenseLayer layer;
    layer.weights = Matrix::identity(n);
    layer.bias = Vector(n, 0.0);
    layer.activation = neural::Activation::linear();
    model.encoder.layers = {layer};
    model.decoder.layers = {layer};
    return model;
}

}  // namespace

TEST_CASE("selection matrix degenerate probabilities") {
    const auto empty = obsgen::sample_selection_matrix(5, 7, 0.0, 1);
    for (const auto& row : empty.rows) CHECK(row.empty());
    const auto full = obsgen::sample_selection_matrix(5, 7, 1.0, 1);
    for (const auto& row : full.rows) CHECK(row.size() == 7);
    CHECK_THROWS_AS((void)obsgen::sample_selection_matrix(0, 7, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)obsgen::sample_selection_matrix(5, 7, 1.5, 1), std::invalid_argument);
}

TEST_CASE("selection matrix is deterministic in its seed") {
    const auto a = obsgen::sample_selection_matrix(50, 40, 0.1, 42);
    const auto b = obsgen::sample_selection_matrix(50, 40, 0.1, 42);
    const auto c = obsgen::sample_selection_matrix(50, 40, 0.1, 43);
    CHECK(a.rows == b.rows);
    CHECK(a.rows != c.rows);
}

TEST_CASE("row sizes follow the binomial law") {
    const std::size_t m = 1000, n = 500;
    const double p = 0.01;
    const auto h = obsgen::sample_selection_matrix(m, n, p, 7);

    double mean = 0.0;
    for (const auto& row : h.rows) mean += static_cast<double>(row.size());
    mean /= static_cast<double>(m);
    const double expected = static_cast<double>(n) * p;
    const double se = std::sqrt(expected * (1.0 - p) / static_cast<double>(m));
    CHECK(std::abs(mean - expected) < 3.0 * se);

    // Chi-square against Binomial(n, p), pooling bins to expected counts
    // of at least 5.
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& row : h.rows) ++histogram[row.size()];
    // Binomial pmf via the recurrence pmf(k+1)/pmf(k).
    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = std::pow(1.0 - p, static_cast<double>(n));
    for (std::size_t k = 0; k + 1 <= n; ++k)
        pmf[k + 1] = pmf[k] * (static_cast<double>(n - k) / static_cast<double>(k + 1)) *
                     (p / (1.0 - p));

    double chi2 = 0.0, pooled_expected = 0.0, pooled_observed = 0.0;
    std::size_t bins = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        pooled_expected += pmf[k] * static_cast<double>(m);
        const auto it = histogram.find(k);
        pooled_observed += it == histogram.end() ? 0.0 : static_cast<double>(it->second);
        if (pooled_expected >= 5.0) {
            const double d = pooled_observed - pooled_expected;
            chi2 += d * d / pooled_expected;
            pooled_expected = 0.0;
            pooled_observed = 0.0;
            ++bins;
        }
    }
    if (pooled_expected > 0.0 && bins > 0) {
        const double d = pooled_observed - pooled_expected;
        chi2 += d * d / pooled_expected;
        ++bins;
    }
    REQUIRE(bins >= 3);
    CHECK(chi2 < oracle::chi_square_critical(bins - 1, 0.01));
}

TEST_CASE("apply_full_observation basics") {
    obsgen::SelectionMatrix h;
    h.m = 1;
    h.n = 3;
    h.p = 1.0;
    h.rows = {{0}};
    Vector x{2.0, 5.0, -1.0};
    const MarginalFn quad{MarginalFn::Kind::Quadratic, 0.5};
    CHECK(obsgen::apply_full_observation(h, quad, x)[0] == doctest::Approx(4.0));

    const MarginalFn recip{MarginalFn::Kind::Reciprocal, 0.5};
    x[0] = 0.5;
    CHECK(obsgen::apply_full_observation(h, recip, x)[0] == doctest::Approx(1.0));

    x[0] = -0.5;  // pole
    CHECK_THROWS_AS((void)obsgen::apply_full_observation(h, recip, x), std::runtime_error);

    obsgen::SelectionMatrix empty_row;
    empty_row.m = 2;
    empty_row.n = 3;
    empty_row.rows = {{}, {1}};
    const Vector y = obsgen::apply_full_observation(empty_row, quad, x);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == doctest::Approx(25.0));

    CHECK_THROWS_AS((void)obsgen::apply_full_observation(h, quad, Vector(2, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("apply_full_observation equals the dense 0/1 matrix product") {
    core::Rng rng(3);
    const std::size_t m = 30, n = 150;
    const auto h = obsgen::sample_selection_matrix(m, n, 0.2, 11);
    const MarginalFn quad{MarginalFn::Kind::Quadratic, 0.5};
    const Vector x = rng.normal_vector(n);
    const Vector y = obsgen::apply_full_observation(h, quad, x);

    Matrix dense(m, n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (int j : h.rows[i]) dense(i, static_cast<std::size_t>(j)) = 1.0;
    Vector fx(n);
    for (std::size_t j = 0; j < n; ++j) fx[j] = x[j] * x[j];
    const Vector ref = core::matvec(dense, fx);
    for (std::size_t i = 0; i < m; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("row sums are additive over disjoint partitions") {
    core::Rng rng(5);
    const auto h = obsgen::sample_selection_matrix(10, 60, 0.3, 13);
    const MarginalFn quad{MarginalFn::Kind::Quadratic, 0.5};
    const Vector x = rng.normal_vector(60);
    const Vector y = obsgen::apply_full_observation(h, quad, x);
    for (std::size_t i = 0; i < h.m; ++i) {
        // Split row i's indices into alternating halves.
        obsgen::SelectionMatrix ha = h, hb = h;
        ha.rows[i].clear();
        hb.rows[i].clear();
        for (std::size_t k = 0; k < h.rows[i].size(); ++k)
            (k % 2 == 0 ? ha : hb).rows[i].push_back(h.rows[i][k]);
        const double split = obsgen::apply_full_observation(ha, quad, x)[i] +
                             obsgen::apply_full_observation(hb, quad, x)[i];
        CHECK(split == doctest::Approx(y[i]).epsilon(1e-12));
    }
}

TEST_CASE("latent operator collapses to a sum of squares with identity codecs") {
    const std::size_t n = 4;
    obsgen::SelectionMatrix h;
    h.m = 4;  // y model needs dof n; use one real row, rest empty
    h.n = n;
    h.rows = {{0, 1, 2, 3}, {}, {}, {}};
    const auto op = obsgen::build_latent_obs_operator(
        identity_model(4), h, MarginalFn{MarginalFn::Kind::Quadratic, 0.5}, identity_model(n));
    const Vector latent{0.5, -1.0, 2.0, 0.25};
    const Vector out = op.eval(latent);
    double expected = 0.0;
    for (double v : latent) expected += v * v;
    CHECK(out[0] == doctest::Approx(expected).epsilon(1e-12));
    for (std::size_t i = 1; i < 4; ++i) CHECK(out[i] == doctest::Approx(0.0));
}

TEST_CASE("latent operator equals the staged manual composition") {
    core::Rng rng(7);
    const std::size_t dof = 12, m = 6;
    Matrix snapshots(dof, 20);
    for (double& v : snapshots.data) v = rng.normal();
    neural::TrainConfig tc;
    tc.epochs = 3;
    tc.seed = 5;
    rom::PodAeOptions options;
    options.hidden_widths = {6};
    const auto x_fit = rom::fit_pod_ae(snapshots, 5, 3, tc, options);

    Matrix obs_data(m, 20);
    for (double& v : obs_data.data) v = rng.normal();
    const auto y_fit = rom::fit_pod_ae(obs_data, 4, 2, tc, options);

    const auto h = obsgen::sample_selection_matrix(m, dof, 0.4, 17);
    const MarginalFn quad{MarginalFn::Kind::Quadratic, 0.5};
    const auto op = obsgen::build_latent_obs_operator(y_fit.model, h, quad, x_fit.model);

    const Vector latent = rng.normal_vector(3);
    const Vector direct = op.eval(latent);
    // Staged: decode -> marginal+select -> encode.
    const Vector full = rom::pod_ae_decode(x_fit.model, latent);
    const Vector y = obsgen::apply_full_observation(h, quad, full);
    const Vector staged = rom::pod_ae_encode(y_fit.model, y);
    for (std::size_t i = 0; i < staged.size(); ++i) CHECK(direct[i] == staged[i]);

    // Purity and batch agreement.
    const Vector again = op.eval(latent);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(direct[i] == again[i]);
    Matrix batch(3, 3);
    for (std::size_t r = 0; r < 3; ++r) batch.set_row(r, latent);
    const Matrix batched = op.eval_batch(batch);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < direct.size(); ++i) CHECK(batched(r, i) == direct[i]);

    // Width chain violations are rejected at construction.
    auto bad = obsgen::sample_selection_matrix(m, dof + 1, 0.4, 17);
    CHECK_THROWS_AS((void)obsgen::build_latent_obs_operator(y_fit.model, bad, quad, x_fit.model),
                    std::invalid_argument);
}

TEST_CASE("selection matrix file round-trips") {
    const auto h = obsgen::sample_selection_matrix(20, 35, 0.15, 23);
    obsgen::write_selection_matrix("test_selection.txt", h);
    const auto back = obsgen::read_selection_matrix("test_selection.txt");
    CHECK(back.m == h.m);
    CHECK(back.n == h.n);
    CHECK(back.p == h.p);
    CHECK(back.seed == h.seed);
    CHECK(back.rows == h.rows);
    std::remove("test_selection.txt");
}
