#include "ecpe/gradcheck.hpp"

#include <cmath>

#include "ecpe/cause_model.hpp"
#include "ecpe/emotion_model.hpp"

namespace ecpe {

namespace {

std::vector<nn::Vector> random_sequence(std::size_t len, std::size_t dim, nn::Rng& rng)
{
    std::vector<nn::Vector> seq(len, nn::Vector(dim));
    for (auto& v : seq)
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return seq;
}

nn::Vector random_vector(std::size_t n, nn::Rng& rng)
{
    nn::Vector v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

// Weighted sum of every hidden output, so gradient flows into each step.
double projected_loss(const std::vector<nn::Vector>& outputs, const std::vector<nn::Vector>& weights)
{
    double s = 0.0;
    for (std::size_t t = 0; t < outputs.size(); ++t)
        for (std::size_t j = 0; j < outputs[t].size(); ++j) s += weights[t][j] * outputs[t][j];
    return s;
}

constexpr std::size_t kToyDim = 6;
constexpr std::size_t kToyHidden = 4;
constexpr std::size_t kToyMid = 5;
constexpr std::size_t kToyLength = 4;

}  // namespace

nn::GradCheckResult check_linear_elu_nll(std::uint64_t seed)
{
    nn::Rng rng(seed);
    nn::Linear first(4, 5), second(5, 8);
    first.init(rng);
    second.init(rng);
    const auto x = random_vector(4, rng);
    const std::size_t target = rng.below(8);
    nn::ParamList params;
    first.collect(params, "first");
    second.collect(params, "second");

    const auto loss = [&] {
        const auto logits = second.forward(nn::elu(first.forward(x)));
        return nn::nll_loss(nn::log_softmax(logits), target);
    };
    const auto loss_and_grad = [&] {
        nn::zero_grad(params);
        const auto pre = first.forward(x);
        const auto act = nn::elu(pre);
        const auto lp = nn::log_softmax(second.forward(act));
        nn::Vector d(lp.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::exp(lp[i]);
        d[target] -= 1.0;
        first.backward(x, nn::elu_backward(pre, second.backward(act, d)));
        return nn::nll_loss(lp, target);
    };
    return nn::gradient_check({params, loss, loss_and_grad}, kGradCheckEps);
}

nn::GradCheckResult check_lstm(std::uint64_t seed)
{
    nn::Rng rng(seed);
    nn::Lstm lstm(kToyDim, 3);
    lstm.init(rng);
    const auto seq = random_sequence(kToyLength, kToyDim, rng);
    const auto weights = random_sequence(kToyLength, 3, rng);
    nn::ParamList params;
    lstm.collect(params, "lstm");

    const auto outputs = [&](const nn::Lstm::Trace& tr) {
        std::vector<nn::Vector> out;
        for (const auto& s : tr) out.push_back(s.h);
        return out;
    };
    const auto loss = [&] { return projected_loss(outputs(lstm.run(seq, false)), weights); };
    const auto loss_and_grad = [&] {
        nn::zero_grad(params);
        const auto tr = lstm.run(seq, false);
        lstm.backward(seq, tr, weights);
        return projected_loss(outputs(tr), weights);
    };
    return nn::gradient_check({params, loss, loss_and_grad}, kGradCheckEps);
}

nn::GradCheckResult check_bilstm(std::uint64_t seed)
{
    nn::Rng rng(seed);
    nn::BiLstm net(kToyDim, kToyHidden);
    net.init(rng);
    const auto seq = random_sequence(kToyLength, kToyDim, rng);
    const auto weights = random_sequence(kToyLength, 2 * kToyHidden, rng);
    nn::ParamList params;
    net.collect(params, "bilstm");

    const auto loss = [&] { return projected_loss(net.forward(seq), weights); };
    const auto loss_and_grad = [&] {
        nn::zero_grad(params);
        const auto tr = net.run(seq);
        net.backward(seq, tr, weights);
        return projected_loss(nn::BiLstm::outputs(tr), weights);
    };
    return nn::gradient_check({params, loss, loss_and_grad}, kGradCheckEps);
}

nn::GradCheckResult check_emotion_architecture(std::uint64_t seed)
{
    nn::Rng rng(seed);
    EmotionClassifier model({kToyDim, kToyHidden, kToyMid});
    model.init(rng);
    const auto seq = random_sequence(kToyLength, kToyDim, rng);
    const auto target = static_cast<Emotion>(rng.below(kNumEmotions));
    const std::uint64_t dropout_seed = rng.next();
    const auto params = model.params();

    // Train mode with a replayed dropout mask.
    const auto loss = [&] {
        nn::Rng r(dropout_seed);
        return nn::nll_loss(forward_emotion(model, seq, true, r), index_of(target));
    };
    const auto loss_and_grad = [&] {
        nn::zero_grad(params);
        nn::Rng r(dropout_seed);
        return emotion_loss_and_grad(model, seq, target, r);
    };
    return nn::gradient_check({params, loss, loss_and_grad}, kGradCheckEps);
}

nn::GradCheckResult check_cause_architecture(std::uint64_t seed)
{
    nn::Rng rng(seed);
    CauseScorer model({kToyDim, kToyHidden, kToyMid});
    model.init(rng);
    const auto seq = random_sequence(kToyLength, kNumEmotions * kToyDim, rng);
    const int label = static_cast<int>(rng.below(2));
    const std::uint64_t dropout_seed = rng.next();
    const auto params = model.params();

    const auto loss = [&] {
        nn::Rng r(dropout_seed);
        return nn::bce_loss(score_clause(model, seq, true, r), label);
    };
    const auto loss_and_grad = [&] {
        nn::zero_grad(params);
        nn::Rng r(dropout_seed);
        return cause_loss_and_grad(model, seq, label, r);
    };
    return nn::gradient_check({params, loss, loss_and_grad}, kGradCheckEps);
}

std::vector<NamedGradCheck> run_gradient_checks(const std::vector<std::uint64_t>& seeds)
{
    using Fn = nn::GradCheckResult (*)(std::uint64_t);
    const std::pair<const char*, Fn> checks[] = {
        {"linear+elu+log_softmax+nll", check_linear_elu_nll},
        {"lstm", check_lstm},
        {"bilstm", check_bilstm},
        {"emotion architecture", check_emotion_architecture},
        {"cause architecture", check_cause_architecture},
    };
    std::vector<NamedGradCheck> out;
    for (auto seed : seeds)
        for (const auto& [name, fn] : checks) out.push_back({name, seed, fn(seed)});
    return out;
}

}  // namespace ecpe
