#include "ecpe/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ecpe/error.hpp"

namespace ecpe::nn {

namespace {

void fill_uniform(std::span<double> v, double bound, Rng& rng)
{
    for (double& x : v) x = rng.uniform(-bound, bound);
}

void require(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal()
{
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::size_t Rng::below(std::size_t n)
{
    require(n > 0, "Rng::below: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
}

void zero_grad(const ParamList& params)
{
    for (const auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

// ---- activations and losses ------------------------------------------------

double sigmoid(double x)
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Vector elu(std::span<const double> x)
{
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : std::expm1(x[i]);
    return y;
}

Vector elu_backward(std::span<const double> x, std::span<const double> dy)
{
    Vector dx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : dy[i] * std::exp(x[i]);
    return dx;
}

Vector log_softmax(std::span<const double> x)
{
    require(!x.empty(), "log_softmax: empty input");
    const double m = *std::max_element(x.begin(), x.end());
    double s = 0.0;
    for (double v : x) s += std::exp(v - m);
    const double lse = m + std::log(s);
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - lse;
    return y;
}

double nll_loss(std::span<const double> log_probs, std::size_t target)
{
    require(target < log_probs.size(), "nll_loss: target out of range");
    return -log_probs[target];
}

double bce_loss(double p, int y)
{
    require(y == 0 || y == 1, "bce_loss: label must be 0 or 1");
    const double q = std::clamp(p, 1e-7, 1.0 - 1e-7);
    return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

Vector dropout_mask(std::size_t n, double p, bool train, Rng& rng)
{
    if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout probability must be in [0, 1)");
    Vector mask(n, 1.0);
    if (!train || p == 0.0) return mask;
    const double keep_scale = 1.0 / (1.0 - p);
    for (double& m : mask) m = rng.bernoulli(p) ? 0.0 : keep_scale;
    return mask;
}

Vector dropout(std::span<const double> x, double p, bool train, Rng& rng)
{
    const auto mask = dropout_mask(x.size(), p, train, rng);
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * mask[i];
    return y;
}

// ---- Linear -----------------------------------------------------------------

Linear::Linear(std::size_t in, std::size_t out)
    : weight(out, in), grad_weight(out, in), bias(out, 0.0), grad_bias(out, 0.0)
{
}

void Linear::init(Rng& rng)
{
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim()));
    fill_uniform(weight.values(), bound, rng);
    fill_uniform(bias, bound, rng);
}

Vector Linear::forward(std::span<const double> x) const
{
    require(x.size() == in_dim(), "Linear::forward: input size mismatch");
    Vector y = bias;
    kernels::matvec_add(weight.view(), x, y);
    return y;
}

Vector Linear::backward(std::span<const double> x, std::span<const double> dy)
{
    require(x.size() == in_dim() && dy.size() == out_dim(), "Linear::backward: shape mismatch");
    kernels::outer_add(dy, x, grad_weight.mutable_view());
    for (std::size_t i = 0; i < dy.size(); ++i) grad_bias[i] += dy[i];
    Vector dx(in_dim(), 0.0);
    kernels::matvec_transposed_add(weight.view(), dy, dx);
    return dx;
}

void Linear::collect(ParamList& out, const std::string& prefix)
{
    out.push_back({prefix + ".weight", weight.values(), grad_weight.values()});
    out.push_back({prefix + ".bias", bias, grad_bias});
}

// ---- LSTM -------------------------------------------------------------------

Lstm::Lstm(std::size_t input, std::size_t hidden)
    : w_input(4 * hidden, input),
      w_hidden(4 * hidden, hidden),
      grad_w_input(4 * hidden, input),
      grad_w_hidden(4 * hidden, hidden),
      bias(4 * hidden, 0.0),
      grad_bias(4 * hidden, 0.0),
      hidden_(hidden)
{
}

void Lstm::init(Rng& rng)
{
    fill_uniform(w_input.values(), 1.0 / std::sqrt(static_cast<double>(input_dim())), rng);
    fill_uniform(w_hidden.values(), 1.0 / std::sqrt(static_cast<double>(hidden_)), rng);
    fill_uniform(bias, 1.0 / std::sqrt(static_cast<double>(hidden_)), rng);
}

LstmState Lstm::cell(std::span<const double> x, std::span<const double> h, std::span<const double> c) const
{
    require(x.size() == input_dim() && h.size() == hidden_ && c.size() == hidden_, "Lstm::cell: shape mismatch");
    const std::size_t H = hidden_;
    Vector z = bias;
    kernels::matvec_add(w_input.view(), x, z);
    kernels::matvec_add(w_hidden.view(), h, z);
    LstmState next{Vector(H), Vector(H)};
    for (std::size_t j = 0; j < H; ++j) {
        const double i = sigmoid(z[j]);
        const double f = sigmoid(z[H + j]);
        const double g = std::tanh(z[2 * H + j]);
        const double o = sigmoid(z[3 * H + j]);
        next.c[j] = f * c[j] + i * g;
        next.h[j] = o * std::tanh(next.c[j]);
    }
    return next;
}

Lstm::Trace Lstm::run(std::span<const Vector> seq, bool reverse) const
{
    const std::size_t H = hidden_;
    const std::size_t T = seq.size();
    Trace trace;
    trace.reserve(T);
    Vector h(H, 0.0), c(H, 0.0);
    for (std::size_t k = 0; k < T; ++k) {
        const std::size_t pos = reverse ? T - 1 - k : k;
        const auto& x = seq[pos];
        require(x.size() == input_dim(), "Lstm::run: input size mismatch");
        Step s;
        s.position = pos;
        s.gates = bias;
        kernels::matvec_add(w_input.view(), x, s.gates);
        kernels::matvec_add(w_hidden.view(), h, s.gates);
        s.c.resize(H);
        s.tanh_c.resize(H);
        s.h.resize(H);
        for (std::size_t j = 0; j < H; ++j) {
            const double i = sigmoid(s.gates[j]);
            const double f = sigmoid(s.gates[H + j]);
            const double g = std::tanh(s.gates[2 * H + j]);
            const double o = sigmoid(s.gates[3 * H + j]);
            s.gates[j] = i;
            s.gates[H + j] = f;
            s.gates[2 * H + j] = g;
            s.gates[3 * H + j] = o;
            s.c[j] = f * c[j] + i * g;
            s.tanh_c[j] = std::tanh(s.c[j]);
            s.h[j] = o * s.tanh_c[j];
        }
        s.h_prev = std::move(h);
        s.c_prev = std::move(c);
        h = s.h;
        c = s.c;
        trace.push_back(std::move(s));
    }
    return trace;
}

void Lstm::backward(std::span<const Vector> seq, const Trace& trace, std::span<const Vector> dh)
{
    require(dh.size() == trace.size(), "Lstm::backward: gradient count mismatch");
    const std::size_t H = hidden_;
    Vector dh_next(H, 0.0), dc_next(H, 0.0), dz(4 * H);
    for (std::size_t k = trace.size(); k-- > 0;) {
        const Step& s = trace[k];
        if (!dh[k].empty()) {
            require(dh[k].size() == H, "Lstm::backward: gradient size mismatch");
            for (std::size_t j = 0; j < H; ++j) dh_next[j] += dh[k][j];
        }
        for (std::size_t j = 0; j < H; ++j) {
            const double i = s.gates[j], f = s.gates[H + j], g = s.gates[2 * H + j], o = s.gates[3 * H + j];
            const double dhj = dh_next[j];
            const double dc = dc_next[j] + dhj * o * (1.0 - s.tanh_c[j] * s.tanh_c[j]);
            dz[j] = dc * g * i * (1.0 - i);
            dz[H + j] = dc * s.c_prev[j] * f * (1.0 - f);
            dz[2 * H + j] = dc * i * (1.0 - g * g);
            dz[3 * H + j] = dhj * s.tanh_c[j] * o * (1.0 - o);
            dc_next[j] = dc * f;
        }
        kernels::outer_add(dz, seq[s.position], grad_w_input.mutable_view());
        kernels::outer_add(dz, s.h_prev, grad_w_hidden.mutable_view());
        for (std::size_t r = 0; r < 4 * H; ++r) grad_bias[r] += dz[r];
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        if (k > 0) kernels::matvec_transposed_add(w_hidden.view(), dz, dh_next);
    }
}

void Lstm::collect(ParamList& out, const std::string& prefix)
{
    out.push_back({prefix + ".w_input", w_input.values(), grad_w_input.values()});
    out.push_back({prefix + ".w_hidden", w_hidden.values(), grad_w_hidden.values()});
    out.push_back({prefix + ".bias", bias, grad_bias});
}

// ---- BiLstm -----------------------------------------------------------------

void BiLstm::init(Rng& rng)
{
    forward_dir.init(rng);
    backward_dir.init(rng);
}

BiLstm::Trace BiLstm::run(std::span<const Vector> seq) const
{
    if (seq.empty()) throw std::invalid_argument("BiLstm: empty sequence");
    return {forward_dir.run(seq, false), backward_dir.run(seq, true)};
}

std::vector<Vector> BiLstm::outputs(const Trace& trace)
{
    const std::size_t T = trace.forward.size();
    std::vector<Vector> out(T);
    for (std::size_t t = 0; t < T; ++t) {
        out[t] = trace.forward[t].h;
        const auto& hb = trace.backward[T - 1 - t].h;
        out[t].insert(out[t].end(), hb.begin(), hb.end());
    }
    return out;
}

std::vector<Vector> BiLstm::forward(std::span<const Vector> seq) const { return outputs(run(seq)); }

Vector BiLstm::final_states(const Trace& trace)
{
    Vector out = trace.forward.back().h;
    const auto& hb = trace.backward.back().h;
    out.insert(out.end(), hb.begin(), hb.end());
    return out;
}

void BiLstm::backward(std::span<const Vector> seq, const Trace& trace, std::span<const Vector> d_out)
{
    const std::size_t T = trace.forward.size();
    const std::size_t H = hidden_dim();
    require(d_out.size() == T, "BiLstm::backward: gradient count mismatch");
    std::vector<Vector> dh_f(T), dh_b(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (d_out[t].empty()) continue;
        require(d_out[t].size() == 2 * H, "BiLstm::backward: gradient size mismatch");
        dh_f[t].assign(d_out[t].begin(), d_out[t].begin() + static_cast<std::ptrdiff_t>(H));
        dh_b[T - 1 - t].assign(d_out[t].begin() + static_cast<std::ptrdiff_t>(H), d_out[t].end());
    }
    forward_dir.backward(seq, trace.forward, dh_f);
    backward_dir.backward(seq, trace.backward, dh_b);
}

void BiLstm::backward_final(std::span<const Vector> seq, const Trace& trace, std::span<const double> d_final)
{
    const std::size_t T = trace.forward.size();
    const std::size_t H = hidden_dim();
    require(d_final.size() == 2 * H, "BiLstm::backward_final: gradient size mismatch");
    std::vector<Vector> dh_f(T), dh_b(T);
    dh_f[T - 1].assign(d_final.begin(), d_final.begin() + static_cast<std::ptrdiff_t>(H));
    dh_b[T - 1].assign(d_final.begin() + static_cast<std::ptrdiff_t>(H), d_final.end());
    forward_dir.backward(seq, trace.forward, dh_f);
    backward_dir.backward(seq, trace.backward, dh_b);
}

void BiLstm::collect(ParamList& out, const std::string& prefix)
{
    forward_dir.collect(out, prefix + ".fwd");
    backward_dir.collect(out, prefix + ".bwd");
}

// ---- SequenceClassifier -----------------------------------------------------

SequenceClassifier::SequenceClassifier(const ClassifierShape& shape)
    : encoder(shape.input_dim, shape.hidden),
      mid_layer(2 * shape.hidden, shape.mid),
      out_layer(shape.mid, shape.out),
      shape_(shape)
{
    require(shape.input_dim > 0 && shape.hidden > 0 && shape.mid > 0 && shape.out > 0,
            "SequenceClassifier: all widths must be positive");
    require(shape.dropout >= 0.0 && shape.dropout < 1.0, "SequenceClassifier: dropout must be in [0, 1)");
}

void SequenceClassifier::init(Rng& rng)
{
    encoder.init(rng);
    mid_layer.init(rng);
    out_layer.init(rng);
}

SequenceClassifier::Trace SequenceClassifier::forward(std::span<const Vector> seq, bool train, Rng& rng) const
{
    Trace t;
    t.encoder = encoder.run(seq);
    t.pooled = BiLstm::final_states(t.encoder);
    t.mask = dropout_mask(t.pooled.size(), shape_.dropout, train, rng);
    t.dropped.resize(t.pooled.size());
    for (std::size_t i = 0; i < t.pooled.size(); ++i) t.dropped[i] = t.pooled[i] * t.mask[i];
    t.mid_pre = mid_layer.forward(t.dropped);
    t.mid_act = elu(t.mid_pre);
    t.logits = out_layer.forward(t.mid_act);
    return t;
}

void SequenceClassifier::backward(std::span<const Vector> seq, const Trace& t, std::span<const double> dlogits)
{
    const auto d_mid_act = out_layer.backward(t.mid_act, dlogits);
    const auto d_mid_pre = elu_backward(t.mid_pre, d_mid_act);
    auto d_pooled = mid_layer.backward(t.dropped, d_mid_pre);
    for (std::size_t i = 0; i < d_pooled.size(); ++i) d_pooled[i] *= t.mask[i];
    encoder.backward_final(seq, t.encoder, d_pooled);
}

ParamList SequenceClassifier::params()
{
    ParamList out;
    encoder.collect(out, "encoder");
    mid_layer.collect(out, "mid");
    out_layer.collect(out, "out");
    return out;
}

// ---- Sgd --------------------------------------------------------------------

Sgd::Sgd(SgdConfig cfg) : cfg_(cfg)
{
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
}

void Sgd::step(const ParamList& params)
{
    if (velocity_.empty()) {
        for (const auto& p : params) velocity_.emplace_back(p.value.size(), 0.0);
    }
    require(velocity_.size() == params.size(), "Sgd::step: parameter list changed");
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& v = velocity_[k];
        const auto& p = params[k];
        require(v.size() == p.value.size(), "Sgd::step: parameter size changed");
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = cfg_.momentum * v[i] + p.grad[i];
            p.value[i] -= cfg_.learning_rate * v[i];
        }
    }
}

// ---- gradient check ---------------------------------------------------------

GradCheckResult gradient_check(const GradCheckTarget& target, double eps)
{
    target.loss_and_grad();
    std::vector<Vector> analytic;
    for (const auto& p : target.params) analytic.emplace_back(p.grad.begin(), p.grad.end());

    GradCheckResult result;
    for (std::size_t k = 0; k < target.params.size(); ++k) {
        const auto& p = target.params[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double saved = p.value[i];
            p.value[i] = saved + eps;
            const double up = target.loss();
            p.value[i] = saved - eps;
            const double down = target.loss();
            p.value[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[k][i];
            const double err = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-8);
            ++result.checked;
            if (err > result.max_relative_error) {
                result.max_relative_error = err;
                result.worst_param = p.name + "[" + std::to_string(i) + "]";
            }
        }
    }
    return result;
}

// ---- persistence ------------------------------------------------------------

namespace {

void put_u32(std::ostream& out, std::uint32_t v)
{
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_f64(std::ostream& out, double d)
{
    const auto v = std::bit_cast<std::uint64_t>(d);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

std::uint64_t get_le(std::istream& in, int bytes, const std::string& path)
{
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), bytes)) throw DataError(path + ": truncated model file");
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::vector<std::uint32_t> read_header(std::istream& in, const std::string& path)
{
    char magic[5];
    if (!in.read(magic, 5) || std::string_view(magic, 5) != std::string_view(kModelMagic, 5))
        throw DataError(path + ": not an ECPE1 model file");
    const auto n = static_cast<std::uint32_t>(get_le(in, 4, path));
    if (n > 64) throw DataError(path + ": implausible descriptor length");
    std::vector<std::uint32_t> desc(n);
    for (auto& d : desc) d = static_cast<std::uint32_t>(get_le(in, 4, path));
    return desc;
}

}  // namespace

void save_params(const std::filesystem::path& path, std::span<const std::uint32_t> descriptor,
                 const ParamList& params)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file " + path.string());
    out.write(kModelMagic, 5);
    put_u32(out, static_cast<std::uint32_t>(descriptor.size()));
    for (auto d : descriptor) put_u32(out, d);
    for (const auto& p : params)
        for (double v : p.value) put_f64(out, v);
    if (!out) throw DataError("failed writing model file " + path.string());
}

std::vector<std::uint32_t> read_descriptor(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path.string());
    return read_header(in, path.string());
}

void load_params(const std::filesystem::path& path, std::span<const std::uint32_t> descriptor,
                 const ParamList& params)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path.string());
    const auto stored = read_header(in, path.string());
    if (!std::equal(stored.begin(), stored.end(), descriptor.begin(), descriptor.end()))
        throw DataError(path.string() + ": architecture descriptor does not match");
    for (const auto& p : params)
        for (double& v : p.value) v = std::bit_cast<double>(get_le(in, 8, path.string()));
    if (in.peek() != std::char_traits<char>::eof()) throw DataError(path.string() + ": trailing bytes in model file");
}

}  // namespace ecpe::nn
