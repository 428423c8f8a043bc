#pragma once

// Small separable training sets for the overfit checks.

#include <string>
#include <vector>

#include "ecpe/cause_model.hpp"
#include "ecpe/embeddings.hpp"
#include "ecpe/emotion_model.hpp"
#include "ecpe/nn.hpp"

namespace ecpe::testing {

struct ToyData {
    EmbeddingTable table{8};
    std::vector<EmotionTrainExample> emotion;
    std::vector<CauseTrainExample> cause;
};

inline ToyData make_toy_data(std::uint64_t seed, std::size_t dim = 8)
{
    ToyData d{EmbeddingTable(dim), {}, {}};
    nn::Rng rng(seed);
    const std::vector<std::string> filler{"the", "hotel", "was", "and", "i", "felt", "it", "our", "stay", "room"};
    // Two distinct high-intensity words per emotion for five emotions.
    const std::vector<std::pair<std::string, Emotion>> emotive{
        {"furious", Emotion::Anger},  {"enraged", Emotion::Anger},   {"thrilled", Emotion::Joy},
        {"elated", Emotion::Joy},     {"terrified", Emotion::Fear},  {"panicked", Emotion::Fear},
        {"heartbroken", Emotion::Sadness}, {"miserable", Emotion::Sadness},
        {"astonished", Emotion::Surprise}, {"stunned", Emotion::Surprise}};
    const std::vector<std::string> markers{"wifi", "mold", "noise", "breakfast", "pool"};
    const std::vector<std::string> plain{"view", "lobby", "desk", "street", "floor"};
    auto add = [&](const std::string& w) {
        std::vector<double> v(dim);
        for (auto& x : v) x = rng.normal();
        d.table.add(w, v);
    };
    for (const auto& w : filler) add(w);
    for (const auto& [w, e] : emotive) add(w);
    for (const auto& w : markers) add(w);
    for (const auto& w : plain) add(w);
    add("because");
    add("broke");

    for (std::size_t i = 0; i < emotive.size(); ++i) {
        std::vector<std::string> tokens;
        const std::size_t len = 3 + rng.below(4);
        for (std::size_t k = 0; k < len; ++k) tokens.push_back(filler[rng.below(filler.size())]);
        tokens.insert(tokens.begin() + static_cast<long>(rng.below(len + 1)), emotive[i].first);
        d.emotion.push_back({tokens, emotive[i].second});
    }

    for (std::size_t i = 0; i < 10; ++i) {
        nn::Vector probs(kNumEmotions, 0.0);
        probs[index_of(emotive[i].second)] = 1.0;
        const bool cause = i % 2 == 0;
        std::vector<std::string> tokens;
        if (cause)
            tokens = {"because", "the", markers[i / 2], "broke"};
        else
            tokens = {"the", plain[i / 2], "was", filler[rng.below(filler.size())]};
        d.cause.push_back({tokens, probs, cause ? 1 : 0});
    }
    return d;
}

}  // namespace ecpe::testing
