#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ecpe/embeddings.hpp"
#include "ecpe/emotion.hpp"
#include "ecpe/nn.hpp"

namespace ecpe {

struct EmotionModelConfig {
    std::size_t input_dim = 0;
    std::size_t hidden = 256;  // per direction
    std::size_t mid = 80;
    double dropout = 0.5;
};

// Review-level classifier over the eight emotions:
// Bi-LSTM -> final states -> dropout -> linear -> ELU -> linear(8) -> log-softmax.
class EmotionClassifier {
public:
    explicit EmotionClassifier(const EmotionModelConfig& cfg);

    const EmotionModelConfig& config() const { return cfg_; }
    void init(nn::Rng& rng) { net_.init(rng); }

    nn::SequenceClassifier& network() { return net_; }
    const nn::SequenceClassifier& network() const { return net_; }
    nn::ParamList params() { return net_.params(); }

    std::vector<std::uint32_t> descriptor() const;
    void save(const std::filesystem::path& path);
    static EmotionClassifier load(const std::filesystem::path& path);

private:
    EmotionModelConfig cfg_;
    nn::SequenceClassifier net_;
};

struct EmotionTrainExample {
    std::vector<std::string> tokens;
    Emotion label;
};

// One vector per in-vocabulary token; unknown tokens are skipped. Throws
// DataError when no token is known.
std::vector<nn::Vector> embed_review(std::span<const std::string> tokens, const EmbeddingTable& table);

// Log-probabilities over the eight emotions.
nn::Vector forward_emotion(const EmotionClassifier& model, std::span<const nn::Vector> inputs, bool train,
                           nn::Rng& rng);
nn::Vector forward_emotion(const EmotionClassifier& model, std::span<const std::string> tokens,
                           const EmbeddingTable& table, bool train, nn::Rng& rng);

// NLL loss on one example; accumulates gradients into the model.
double emotion_loss_and_grad(EmotionClassifier& model, std::span<const nn::Vector> inputs, Emotion target,
                             nn::Rng& rng);

nn::Vector emotion_probs(std::span<const double> log_probs);
Emotion argmax_emotion(std::span<const double> scores);

struct TrainOptions {
    std::size_t epochs = 0;
    nn::SgdConfig sgd;
    std::uint64_t seed = 0;
    // Called after every epoch with (1-based epoch, mean loss).
    std::function<void(std::size_t, double)> on_epoch;
};

struct EmotionTrainResult {
    EmotionClassifier model;
    std::vector<double> epoch_losses;
    std::size_t skipped = 0;
};

inline constexpr std::size_t kEmotionEpochs = 100;

// Batch-size-1 SGD over a seeded shuffle each epoch. Examples whose tokens
// are all out of vocabulary are skipped and counted. Throws
// std::invalid_argument when no usable example remains.
EmotionTrainResult train_emotion(std::span<const EmotionTrainExample> examples, const EmbeddingTable& table,
                                 const EmotionModelConfig& cfg, const TrainOptions& opts);

}  // namespace ecpe
