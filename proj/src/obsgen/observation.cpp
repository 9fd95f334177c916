#include "gla/obsgen/observation.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "gla/core/io.hpp"
#include "gla/core/rng.hpp"

namespace gla::obsgen {

SelectionMatrix sample_selection_matrix(std::size_t m, std::size_t n, double p,
                                        std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("selection matrix needs m, n >= 1");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("selection probability must lie in [0,1]");
    SelectionMatrix h;
    h.m = m;
    h.n = n;
    h.p = p;
    h.seed = seed;
    h.rows.resize(m);
    core::Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rng.uniform01() < p) h.rows[i].push_back(static_cast<int>(j));
    return h;
}

void write_selection_matrix(const std::string& path, const SelectionMatrix& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << h.m << ' ' << h.n << ' ' << core::format_double(h.p) << ' ' << h.seed << '\n';
    for (const auto& row : h.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << ' ';
            out << row[k];
        }
        out << '\n';
    }
}

SelectionMatrix read_selection_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    SelectionMatrix h;
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("bad selection matrix header");
    std::istringstream hs(header);
    if (!(hs >> h.m >> h.n >> h.p >> h.seed))
        throw std::runtime_error("bad selection matrix header in " + path);
    h.rows.resize(h.m);
    std::string line;
    for (std::size_t i = 0; i < h.m; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("truncated selection matrix in " + path);
        std::istringstream ls(line);
        int idx;
        while (ls >> idx) h.rows[i].push_back(idx);
    }
    return h;
}

double MarginalFn::operator()(double x) const {
    switch (kind) {
        case Kind::Quadratic: return x * x;
        case Kind::Reciprocal: return 1.0 / (x + offset);
    }
    return x;
}

std::string MarginalFn::name() const {
    return kind == Kind::Quadratic ? "quadratic" : "reciprocal";
}

MarginalFn MarginalFn::parse(const std::string& name) {
    if (name == "quadratic") return {Kind::Quadratic, 0.5};
    if (name == "reciprocal") return {Kind::Reciprocal, 0.5};
    throw std::invalid_argument("unknown marginal function: " + name);
}

Vector apply_full_observation(const SelectionMatrix& h, const MarginalFn& f, const Vector& x) {
    if (x.size() != h.n) throw std::invalid_argument("apply_full_observation: state width mismatch");
    Vector y(h.m, 0.0);
    // Exceptions may not cross the parallel region; singular entries are
    // flagged and reported afterwards.
    std::atomic<long long> singular_entry{-1};
    core::parallel_for(h.m, [&](std::size_t i) {
        double s = 0.0;
        for (int j : h.rows[i]) {
            const double xj = x[static_cast<std::size_t>(j)];
            if (f.kind == MarginalFn::Kind::Reciprocal && std::abs(xj + f.offset) < 1e-9) {
                long long expected = -1;
                singular_entry.compare_exchange_strong(expected, j);
                return;
            }
            s += f(xj);
        }
        y[i] = s;
    });
    if (singular_entry.load() >= 0)
        throw std::runtime_error("reciprocal marginal singular at state entry " +
                                 std::to_string(singular_entry.load()));
    return y;
}

Vector LatentObsOperator::eval(const Vector& latent_state) const {
    const Vector full_state = rom::pod_ae_decode(x_model, latent_state);
    const Vector y = apply_full_observation(h, f, full_state);
    return rom::pod_ae_encode(y_model, y);
}

Matrix LatentObsOperator::eval_batch(const Matrix& latent_states) const {
    Matrix out(latent_states.rows, output_dim());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    core::parallel_for(latent_states.rows, [&](std::size_t i) {
        try {
            out.set_row(i, eval(latent_states.row(i)));
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    return out;
}

LatentObsOperator build_latent_obs_operator(rom::PodAeModel y_model, SelectionMatrix h,
                                            MarginalFn f, rom::PodAeModel x_model) {
    x_model.validate();
    y_model.validate();
    if (x_model.dof() != h.n)
        throw std::invalid_argument("latent operator: state decoder width differs from H columns");
    if (y_model.dof() != h.m)
        throw std::invalid_argument("latent operator: observation encoder width differs from H rows");
    LatentObsOperator op;
    op.y_model = std::move(y_model);
    op.h = std::move(h);
    op.f = f;
    op.x_model = std::move(x_model);
    return op;
}

}  // namespace gla::obsgen
