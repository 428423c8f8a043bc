#include "ecpe/emotion_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ecpe/error.hpp"

namespace ecpe {

namespace {

constexpr std::uint32_t kEmotionKind = 1;

std::size_t as_size(std::uint32_t v) { return static_cast<std::size_t>(v); }

}  // namespace

EmotionClassifier::EmotionClassifier(const EmotionModelConfig& cfg)
    : cfg_(cfg), net_({cfg.input_dim, cfg.hidden, cfg.mid, kNumEmotions, cfg.dropout})
{
}

std::vector<std::uint32_t> EmotionClassifier::descriptor() const
{
    return {kEmotionKind, static_cast<std::uint32_t>(cfg_.input_dim), static_cast<std::uint32_t>(cfg_.hidden),
            static_cast<std::uint32_t>(cfg_.mid), static_cast<std::uint32_t>(kNumEmotions)};
}

void EmotionClassifier::save(const std::filesystem::path& path)
{
    nn::save_params(path, descriptor(), params());
}

EmotionClassifier EmotionClassifier::load(const std::filesystem::path& path)
{
    const auto desc = nn::read_descriptor(path);
    if (desc.size() != 5 || desc[0] != kEmotionKind || desc[4] != kNumEmotions)
        throw DataError(path.string() + ": not an emotion model");
    EmotionClassifier model({as_size(desc[1]), as_size(desc[2]), as_size(desc[3])});
    nn::load_params(path, desc, model.params());
    return model;
}

std::vector<nn::Vector> embed_review(std::span<const std::string> tokens, const EmbeddingTable& table)
{
    std::vector<nn::Vector> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (auto v = table.find(t)) out.emplace_back(v->begin(), v->end());
    if (out.empty()) throw DataError("review has no in-vocabulary tokens");
    return out;
}

nn::Vector forward_emotion(const EmotionClassifier& model, std::span<const nn::Vector> inputs, bool train,
                           nn::Rng& rng)
{
    const auto trace = model.network().forward(inputs, train, rng);
    return nn::log_softmax(trace.logits);
}

nn::Vector forward_emotion(const EmotionClassifier& model, std::span<const std::string> tokens,
                           const EmbeddingTable& table, bool train, nn::Rng& rng)
{
    const auto inputs = embed_review(tokens, table);
    return forward_emotion(model, inputs, train, rng);
}

double emotion_loss_and_grad(EmotionClassifier& model, std::span<const nn::Vector> inputs, Emotion target,
                             nn::Rng& rng)
{
    auto& net = model.network();
    const auto trace = net.forward(inputs, true, rng);
    const auto log_probs = nn::log_softmax(trace.logits);
    // d(NLL o log-softmax)/dz = softmax(z) - onehot(target)
    nn::Vector dlogits(log_probs.size());
    for (std::size_t i = 0; i < dlogits.size(); ++i) dlogits[i] = std::exp(log_probs[i]);
    dlogits[index_of(target)] -= 1.0;
    net.backward(inputs, trace, dlogits);
    return nn::nll_loss(log_probs, index_of(target));
}

nn::Vector emotion_probs(std::span<const double> log_probs)
{
    nn::Vector p(log_probs.size());
    std::transform(log_probs.begin(), log_probs.end(), p.begin(), [](double v) { return std::exp(v); });
    return p;
}

Emotion argmax_emotion(std::span<const double> scores)
{
    if (scores.size() != kNumEmotions) throw std::invalid_argument("argmax_emotion: expected 8 scores");
    return static_cast<Emotion>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

EmotionTrainResult train_emotion(std::span<const EmotionTrainExample> examples, const EmbeddingTable& table,
                                 const EmotionModelConfig& cfg, const TrainOptions& opts)
{
    struct Prepared {
        std::vector<nn::Vector> inputs;
        Emotion label;
    };
    std::vector<Prepared> data;
    std::size_t skipped = 0;
    for (const auto& ex : examples) {
        try {
            data.push_back({embed_review(ex.tokens, table), ex.label});
        } catch (const DataError&) {
            ++skipped;
        }
    }
    if (data.empty()) throw std::invalid_argument("train_emotion: no usable training examples");

    nn::Rng rng(opts.seed);
    EmotionClassifier model(cfg);
    model.init(rng);
    const auto params = model.params();
    nn::Sgd sgd(opts.sgd);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> losses;
    losses.reserve(opts.epochs);
    for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
        rng.shuffle(order);
        double total = 0.0;
        for (auto idx : order) {
            nn::zero_grad(params);
            total += emotion_loss_and_grad(model, data[idx].inputs, data[idx].label, rng);
            sgd.step(params);
        }
        const double mean = total / static_cast<double>(data.size());
        losses.push_back(mean);
        if (opts.on_epoch) opts.on_epoch(epoch, mean);
    }
    return {std::move(model), std::move(losses), skipped};
}

}  // namespace ecpe
