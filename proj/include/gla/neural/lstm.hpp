#pragma once

#include <string>
#include <utility>

#include "gla/neural/network.hpp"

namespace gla::neural {

/// Gate parameters of a single LSTM cell. Each gate weight matrix acts on
/// the concatenation [h_prev, x] as one block, hidden x (hidden + input).
struct LstmCellParams {
    Matrix w_forget, w_input, w_cell, w_output;
    Vector b_forget, b_input, b_cell, b_output;
    std::size_t hidden_dim = 0;
    std::size_t input_dim = 0;

    void validate() const;
};

LstmCellParams init_lstm_cell(std::size_t hidden_dim, std::size_t input_dim, core::Rng& rng);

/// Per-step activations kept for backpropagation through time. Batch
/// matrices, one sequence per row.
struct LstmStepCache {
    Matrix concat;  // [h_prev, x], batch x (hidden + input)
    Matrix f, i, c_bar, o;
    Matrix c_prev, c, tanh_c;
};

/// One cell update over a batch: f = sigmoid(Wf.[h,x]+bf), i likewise,
/// c_bar = tanh(Wc.[h,x]+bc), c = f*c_prev + i*c_bar, h = o * tanh(c).
void lstm_step(const LstmCellParams& cell, const Matrix& h_prev, const Matrix& c_prev,
               const Matrix& x, Matrix& h_out, Matrix& c_out, LstmStepCache* cache = nullptr);

/// Single-vector convenience wrapper; returns (h, c).
std::pair<Vector, Vector> lstm_cell_step(const LstmCellParams& cell, const Vector& h_prev,
                                         const Vector& c_prev, const Vector& x);

struct LstmGradients {
    Matrix w_forget, w_input, w_cell, w_output;
    Vector b_forget, b_input, b_cell, b_output;

    static LstmGradients zeros(const LstmCellParams& cell);
};

/// Backward pass of one step. dh/dc are gradients flowing into h_out/c_out;
/// parameter gradients accumulate into acc and the returned dh_prev/dc_prev/dx
/// feed the previous step.
void lstm_step_backward(const LstmCellParams& cell, const LstmStepCache& cache, const Matrix& dh,
                        const Matrix& dc_in, LstmGradients& acc, Matrix& dh_prev, Matrix& dc_prev,
                        Matrix& dx);

void save_lstm_cell(const std::string& dir, const std::string& prefix, const LstmCellParams& cell);
LstmCellParams load_lstm_cell(const std::string& dir, const std::string& prefix);

}  // namespace gla::neural
