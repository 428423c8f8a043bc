#pragma once

// Minimal neural toolkit: dense layers, an LSTM with backpropagation
// through time, a bidirectional encoder, the shared classifier head used by
// the emotion and cause models, losses, SGD with momentum, finite-difference
// gradient checking and a binary parameter container. All arithmetic is in
// double precision.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ecpe/kernels.hpp"

namespace ecpe::nn {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    kernels::ConstMatrixView view() const { return {data_, rows_, cols_}; }
    kernels::MatrixView mutable_view() { return {data_, rows_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Seeded generator. Distributions are implemented here rather than with
// <random> distributions so that streams are identical across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();                        // standard normal
    std::size_t below(std::size_t n);       // [0, n), n > 0
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// A parameter tensor and its gradient accumulator, both viewed flat.
struct Param {
    std::string name;
    std::span<double> value;
    std::span<double> grad;
};
using ParamList = std::vector<Param>;

void zero_grad(const ParamList& params);

// ---- activations and losses ------------------------------------------------

double sigmoid(double x);
Vector elu(std::span<const double> x);
// dL/dx given the pre-activation x and dL/dy.
Vector elu_backward(std::span<const double> x, std::span<const double> dy);
Vector log_softmax(std::span<const double> x);
double nll_loss(std::span<const double> log_probs, std::size_t target);
double bce_loss(double p, int y);

// Per-element multipliers applied by inverted dropout: 0 for dropped
// elements, 1/(1-p) for survivors, 1 everywhere in eval mode or when p = 0.
// Throws std::invalid_argument when p is outside [0, 1).
Vector dropout_mask(std::size_t n, double p, bool train, Rng& rng);
Vector dropout(std::span<const double> x, double p, bool train, Rng& rng);

// ---- layers -----------------------------------------------------------------

class Linear {
public:
    Linear() = default;
    Linear(std::size_t in, std::size_t out);

    std::size_t in_dim() const { return weight.cols(); }
    std::size_t out_dim() const { return weight.rows(); }

    void init(Rng& rng);
    Vector forward(std::span<const double> x) const;
    // Accumulates parameter gradients and returns dL/dx.
    Vector backward(std::span<const double> x, std::span<const double> dy);
    void collect(ParamList& out, const std::string& prefix);

    Matrix weight, grad_weight;
    Vector bias, grad_bias;
};

struct LstmState {
    Vector h;
    Vector c;
};

// Standard LSTM without peepholes. Gate pre-activations are stacked in
// blocks of `hidden` rows in the order input, forget, cell, output:
//   z = W x + U h + b
//   i = sigmoid(z_i), f = sigmoid(z_f), g = tanh(z_g), o = sigmoid(z_o)
//   c' = f * c + i * g,  h' = o * tanh(c')
class Lstm {
public:
    struct Step {
        std::size_t position;  // index into the input sequence
        Vector h_prev, c_prev;
        Vector gates;          // activated i, f, g, o (4 * hidden)
        Vector c, tanh_c, h;
    };
    using Trace = std::vector<Step>;

    Lstm() = default;
    Lstm(std::size_t input, std::size_t hidden);

    std::size_t input_dim() const { return w_input.cols(); }
    std::size_t hidden_dim() const { return hidden_; }

    void init(Rng& rng);
    LstmState cell(std::span<const double> x, std::span<const double> h, std::span<const double> c) const;
    // Runs from a zero state over seq, right-to-left when reverse is set.
    Trace run(std::span<const Vector> seq, bool reverse) const;
    // dh[k] is the external gradient on the hidden output of step k (in
    // processing order); empty vectors mean zero. Accumulates parameter
    // gradients through every step.
    void backward(std::span<const Vector> seq, const Trace& trace, std::span<const Vector> dh);
    void collect(ParamList& out, const std::string& prefix);

    Matrix w_input, w_hidden, grad_w_input, grad_w_hidden;
    Vector bias, grad_bias;

private:
    std::size_t hidden_ = 0;
};

class BiLstm {
public:
    struct Trace {
        Lstm::Trace forward, backward;
    };

    BiLstm() = default;
    BiLstm(std::size_t input, std::size_t hidden) : forward_dir(input, hidden), backward_dir(input, hidden) {}

    std::size_t input_dim() const { return forward_dir.input_dim(); }
    std::size_t hidden_dim() const { return forward_dir.hidden_dim(); }

    void init(Rng& rng);
    // Throws std::invalid_argument on an empty sequence.
    Trace run(std::span<const Vector> seq) const;
    // output[t] = concat(h_fwd[t], h_bwd[t])
    std::vector<Vector> forward(std::span<const Vector> seq) const;
    static std::vector<Vector> outputs(const Trace& trace);
    // Final hidden state of each direction: concat(h_fwd[T-1], h_bwd[0]).
    static Vector final_states(const Trace& trace);
    // d_out[t] is the gradient on output[t] (length 2 * hidden or empty).
    void backward(std::span<const Vector> seq, const Trace& trace, std::span<const Vector> d_out);
    void backward_final(std::span<const Vector> seq, const Trace& trace, std::span<const double> d_final);
    void collect(ParamList& out, const std::string& prefix);

    Lstm forward_dir, backward_dir;
};

// Bi-LSTM -> final states -> dropout -> linear -> ELU -> linear, emitting
// raw logits. The emotion and cause models add their own output function.
struct ClassifierShape {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;     // per direction
    std::size_t mid = 80;
    std::size_t out = 0;
    double dropout = 0.5;

    bool operator==(const ClassifierShape&) const = default;
};

class SequenceClassifier {
public:
    struct Trace {
        BiLstm::Trace encoder;
        Vector pooled, mask, dropped, mid_pre, mid_act, logits;
    };

    SequenceClassifier() = default;
    explicit SequenceClassifier(const ClassifierShape& shape);

    const ClassifierShape& shape() const { return shape_; }
    void init(Rng& rng);
    Trace forward(std::span<const Vector> seq, bool train, Rng& rng) const;
    void backward(std::span<const Vector> seq, const Trace& trace, std::span<const double> dlogits);
    ParamList params();
    void zero_grad() { nn::zero_grad(params()); }

    BiLstm encoder;
    Linear mid_layer, out_layer;

private:
    ClassifierShape shape_;
};

// ---- optimisation -----------------------------------------------------------

struct SgdConfig {
    double learning_rate = 0.003;
    double momentum = 0.9;
};

// Classical momentum: v <- mu v + g; theta <- theta - lr v.
class Sgd {
public:
    // Throws std::invalid_argument unless lr > 0 and momentum in [0, 1).
    explicit Sgd(SgdConfig cfg);
    void step(const ParamList& params);
    const SgdConfig& config() const { return cfg_; }

private:
    SgdConfig cfg_;
    std::vector<Vector> velocity_;
};

// ---- verification -----------------------------------------------------------

struct GradCheckTarget {
    ParamList params;
    // Loss evaluation with no gradient side effects.
    std::function<double()> loss;
    // Zeroes gradients, evaluates the loss and fills analytic gradients.
    std::function<double()> loss_and_grad;
};

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::string worst_param;
    std::size_t checked = 0;
};

// Compares every analytic gradient element against the central difference
// (f(t+eps) - f(t-eps)) / 2eps; error is |a - n| / max(|a| + |n|, 1e-8).
GradCheckResult gradient_check(const GradCheckTarget& target, double eps = 1e-4);

// ---- persistence ------------------------------------------------------------

inline constexpr char kModelMagic[] = "ECPE1";

// Layout: 5 magic bytes "ECPE1"; u32 descriptor length n; n u32 descriptor
// values; then every parameter tensor in collection order as f64. All
// integers and floats little-endian.
void save_params(const std::filesystem::path& path, std::span<const std::uint32_t> descriptor,
                 const ParamList& params);
std::vector<std::uint32_t> read_descriptor(const std::filesystem::path& path);
// Throws DataError if the stored descriptor differs or sizes do not match.
void load_params(const std::filesystem::path& path, std::span<const std::uint32_t> descriptor,
                 const ParamList& params);

}  // namespace ecpe::nn
