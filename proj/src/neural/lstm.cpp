#include "gla/neural/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "gla/core/io.hpp"

namespace gla::neural {

namespace {

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) out(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) out(i, a.cols + j) = b(i, j);
    }
    return out;
}

Matrix gate_pre(const Matrix& z, const Matrix& w, const Vector& b) {
    Matrix pre = core::matmul_nt(z, w);
    for (std::size_t i = 0; i < pre.rows; ++i)
        for (std::size_t j = 0; j < pre.cols; ++j) pre(i, j) += b[j];
    return pre;
}

void sigmoid_inplace(Matrix& m) {
    for (double& v : m.data) v = 1.0 / (1.0 + std::exp(-v));
}

void tanh_inplace(Matrix& m) {
    for (double& v : m.data) v = std::tanh(v);
}

}  // namespace

void LstmCellParams::validate() const {
    const std::size_t in = hidden_dim + input_dim;
    auto check = [&](const Matrix& w, const Vector& b, const char* gate) {
        if (w.rows != hidden_dim || w.cols != in || b.size() != hidden_dim)
            throw std::invalid_argument(std::string("lstm cell: bad shape for ") + gate);
    };
    check(w_forget, b_forget, "forget gate");
    check(w_input, b_input, "input gate");
    check(w_cell, b_cell, "cell gate");
    check(w_output, b_output, "output gate");
}

LstmCellParams init_lstm_cell(std::size_t hidden_dim, std::size_t input_dim, core::Rng& rng) {
    LstmCellParams cell;
    cell.hidden_dim = hidden_dim;
    cell.input_dim = input_dim;
    const std::size_t in = hidden_dim + input_dim;
    const double bound = std::sqrt(6.0 / static_cast<double>(in + hidden_dim));
    auto make = [&](Matrix& w, Vector& b) {
        w = Matrix(hidden_dim, in);
        for (double& v : w.data) v = rng.uniform(-bound, bound);
        b.assign(hidden_dim, 0.0);
    };
    make(cell.w_forget, cell.b_forget);
    make(cell.w_input, cell.b_input);
    make(cell.w_cell, cell.b_cell);
    make(cell.w_output, cell.b_output);
    // Forget bias at 1 keeps early memory open, the usual LSTM default.
    for (double& v : cell.b_forget) v = 1.0;
    return cell;
}

void lstm_step(const LstmCellParams& cell, const Matrix& h_prev, const Matrix& c_prev,
               const Matrix& x, Matrix& h_out, Matrix& c_out, LstmStepCache* cache) {
    if (h_prev.cols != cell.hidden_dim || x.cols != cell.input_dim ||
        c_prev.cols != cell.hidden_dim || h_prev.rows != x.rows || c_prev.rows != x.rows)
        throw std::invalid_argument("lstm_step: width mismatch");

    const Matrix z = concat_cols(h_prev, x);
    Matrix f = gate_pre(z, cell.w_forget, cell.b_forget);
    Matrix i = gate_pre(z, cell.w_input, cell.b_input);
    Matrix c_bar = gate_pre(z, cell.w_cell, cell.b_cell);
    Matrix o = gate_pre(z, cell.w_output, cell.b_output);
    sigmoid_inplace(f);
    sigmoid_inplace(i);
    tanh_inplace(c_bar);
    sigmoid_inplace(o);

    Matrix c(x.rows, cell.hidden_dim);
    for (std::size_t k = 0; k < c.data.size(); ++k)
        c.data[k] = f.data[k] * c_prev.data[k] + i.data[k] * c_bar.data[k];
    Matrix tanh_c = c;
    tanh_inplace(tanh_c);
    Matrix h(x.rows, cell.hidden_dim);
    for (std::size_t k = 0; k < h.data.size(); ++k) h.data[k] = o.data[k] * tanh_c.data[k];

    if (cache) {
        cache->concat = z;
        cache->f = std::move(f);
        cache->i = std::move(i);
        cache->c_bar = std::move(c_bar);
        cache->o = std::move(o);
        cache->c_prev = c_prev;
        cache->c = c;
        cache->tanh_c = std::move(tanh_c);
    }
    h_out = std::move(h);
    c_out = std::move(c);
}

std::pair<Vector, Vector> lstm_cell_step(const LstmCellParams& cell, const Vector& h_prev,
                                         const Vector& c_prev, const Vector& x) {
    Matrix hp(1, h_prev.size()), cp(1, c_prev.size()), xm(1, x.size());
    hp.set_row(0, h_prev);
    cp.set_row(0, c_prev);
    xm.set_row(0, x);
    Matrix h, c;
    lstm_step(cell, hp, cp, xm, h, c);
    return {h.row(0), c.row(0)};
}

LstmGradients LstmGradients::zeros(const LstmCellParams& cell) {
    LstmGradients g;
    const std::size_t in = cell.hidden_dim + cell.input_dim;
    g.w_forget = Matrix(cell.hidden_dim, in);
    g.w_input = Matrix(cell.hidden_dim, in);
    g.w_cell = Matrix(cell.hidden_dim, in);
    g.w_output = Matrix(cell.hidden_dim, in);
    g.b_forget.assign(cell.hidden_dim, 0.0);
    g.b_input.assign(cell.hidden_dim, 0.0);
    g.b_cell.assign(cell.hidden_dim, 0.0);
    g.b_output.assign(cell.hidden_dim, 0.0);
    return g;
}

void lstm_step_backward(const LstmCellParams& cell, const LstmStepCache& cache, const Matrix& dh,
                        const Matrix& dc_in, LstmGradients& acc, Matrix& dh_prev, Matrix& dc_prev,
                        Matrix& dx) {
    const std::size_t batch = dh.rows;
    const std::size_t hid = cell.hidden_dim;

    // dc collects both the direct path and the one through h = o * tanh(c).
    Matrix dc = dc_in;
    Matrix d_o(batch, hid), d_f(batch, hid), d_i(batch, hid), d_cbar(batch, hid);
    for (std::size_t k = 0; k < dc.data.size(); ++k) {
        const double th = cache.tanh_c.data[k];
        d_o.data[k] = dh.data[k] * th;
        dc.data[k] += dh.data[k] * cache.o.data[k] * (1.0 - th * th);
        d_f.data[k] = dc.data[k] * cache.c_prev.data[k];
        d_i.data[k] = dc.data[k] * cache.c_bar.data[k];
        d_cbar.data[k] = dc.data[k] * cache.i.data[k];
    }

    dc_prev = Matrix(batch, hid);
    for (std::size_t k = 0; k < dc.data.size(); ++k)
        dc_prev.data[k] = dc.data[k] * cache.f.data[k];

    // Gate pre-activation gradients.
    auto through_sigmoid = [](Matrix& d, const Matrix& s) {
        for (std::size_t k = 0; k < d.data.size(); ++k)
            d.data[k] *= s.data[k] * (1.0 - s.data[k]);
    };
    through_sigmoid(d_f, cache.f);
    through_sigmoid(d_i, cache.i);
    through_sigmoid(d_o, cache.o);
    for (std::size_t k = 0; k < d_cbar.data.size(); ++k)
        d_cbar.data[k] *= 1.0 - cache.c_bar.data[k] * cache.c_bar.data[k];

    auto accumulate = [&](const Matrix& dgate, Matrix& wgrad, Vector& bgrad) {
        const Matrix gw = core::matmul_tn(dgate, cache.concat);
        for (std::size_t k = 0; k < wgrad.data.size(); ++k) wgrad.data[k] += gw.data[k];
        for (std::size_t i = 0; i < dgate.rows; ++i)
            for (std::size_t j = 0; j < dgate.cols; ++j) bgrad[j] += dgate(i, j);
    };
    accumulate(d_f, acc.w_forget, acc.b_forget);
    accumulate(d_i, acc.w_input, acc.b_input);
    accumulate(d_cbar, acc.w_cell, acc.b_cell);
    accumulate(d_o, acc.w_output, acc.b_output);

    Matrix dz = core::matmul(d_f, cell.w_forget);
    const Matrix dz_i = core::matmul(d_i, cell.w_input);
    const Matrix dz_c = core::matmul(d_cbar, cell.w_cell);
    const Matrix dz_o = core::matmul(d_o, cell.w_output);
    for (std::size_t k = 0; k < dz.data.size(); ++k)
        dz.data[k] += dz_i.data[k] + dz_c.data[k] + dz_o.data[k];

    dh_prev = Matrix(batch, hid);
    dx = Matrix(batch, cell.input_dim);
    for (std::size_t i = 0; i < batch; ++i) {
        for (std::size_t j = 0; j < hid; ++j) dh_prev(i, j) = dz(i, j);
        for (std::size_t j = 0; j < cell.input_dim; ++j) dx(i, j) = dz(i, hid + j);
    }
}

void save_lstm_cell(const std::string& dir, const std::string& prefix,
                    const LstmCellParams& cell) {
    core::ensure_directory(dir);
    const std::string base = dir + "/" + prefix;
    core::write_matrix(base + "_wf.txt", cell.w_forget);
    core::write_matrix(base + "_wi.txt", cell.w_input);
    core::write_matrix(base + "_wc.txt", cell.w_cell);
    core::write_matrix(base + "_wo.txt", cell.w_output);
    core::write_vector(base + "_bf.txt", cell.b_forget);
    core::write_vector(base + "_bi.txt", cell.b_input);
    core::write_vector(base + "_bc.txt", cell.b_cell);
    core::write_vector(base + "_bo.txt", cell.b_output);
    core::Manifest manifest;
    manifest["hidden_dim"] = std::to_string(cell.hidden_dim);
    manifest["input_dim"] = std::to_string(cell.input_dim);
    core::write_manifest(base + "_manifest.txt", manifest);
}

LstmCellParams load_lstm_cell(const std::string& dir, const std::string& prefix) {
    const std::string base = dir + "/" + prefix;
    const auto manifest = core::read_manifest(base + "_manifest.txt");
    LstmCellParams cell;
    cell.hidden_dim = std::stoul(manifest.at("hidden_dim"));
    cell.input_dim = std::stoul(manifest.at("input_dim"));
    cell.w_forget = core::read_matrix(base + "_wf.txt");
    cell.w_input = core::read_matrix(base + "_wi.txt");
    cell.w_cell = core::read_matrix(base + "_wc.txt");
    cell.w_output = core::read_matrix(base + "_wo.txt");
    cell.b_forget = core::read_vector(base + "_bf.txt");
    cell.b_input = core::read_vector(base + "_bi.txt");
    cell.b_cell = core::read_vector(base + "_bc.txt");
    cell.b_output = core::read_vector(base + "_bo.txt");
    cell.validate();
    return cell;
}

}  // namespace gla::neural
