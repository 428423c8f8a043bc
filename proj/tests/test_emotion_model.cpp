#include <doctest.h>

#include <cmath>

#include "ecpe/emotion_model.hpp"
#include "ecpe/error.hpp"
#include "toy_data.hpp"

using namespace ecpe;

TEST_CASE("embedding a review skips unknown tokens")
{
    EmbeddingTable t(2);
    t.add("good", std::vector<double>{1, 0});
    t.add("bed", std::vector<double>{0, 1});
    t.add("hotel", std::vector<double>{1, 1});
    const std::vector<std::string> known{"good", "bed", "hotel"};
    CHECK(embed_review(known, t).size() == 3);
    const std::vector<std::string> mixed{"zzz", "bed", "qqq"};
    auto one = embed_review(mixed, t);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == nn::Vector{0, 1});
    const std::vector<std::string> none{"zzz"};
    CHECK_THROWS_AS(embed_review(none, t), DataError);
}

TEST_CASE("emotion forward pass")
{
    auto data = testing::make_toy_data(1);
    EmotionClassifier model({8, 6, 5, 0.5});
    nn::Rng rng(2);
    model.init(rng);
    nn::Rng unused(0);
    auto a = forward_emotion(model, data.emotion[0].tokens, data.table, false, unused);
    auto b = forward_emotion(model, data.emotion[0].tokens, data.table, false, unused);
    CHECK(a.size() == kNumEmotions);
    CHECK(a == b);
    double s = 0;
    for (double v : emotion_probs(a)) s += v;
    CHECK(s == doctest::Approx(1.0));

    nn::Rng r1(9), r2(9);
    CHECK(forward_emotion(model, data.emotion[0].tokens, data.table, true, r1) ==
          forward_emotion(model, data.emotion[0].tokens, data.table, true, r2));
}

TEST_CASE("emotion probabilities and argmax")
{
    auto p = emotion_probs(nn::Vector(8, -std::log(8.0)));
    for (double v : p) CHECK(v == doctest::Approx(0.125));
    nn::Vector lp{std::log(0.1), std::log(0.2), std::log(0.7), -50, -50, -50, -50, -50};
    auto q = emotion_probs(lp);
    CHECK(q[2] == doctest::Approx(0.7));
    CHECK(q[0] == doctest::Approx(std::exp(lp[0])));
    CHECK(argmax_emotion(lp) == Emotion::Disgust);
    CHECK(argmax_emotion(nn::Vector(8, 0.0)) == Emotion::Anger);
}

TEST_CASE("emotion model overfits ten separable reviews")
{
    auto data = testing::make_toy_data(3);
    TrainOptions opts;
    opts.epochs = kEmotionEpochs;
    opts.seed = 4;
    auto result = train_emotion(data.emotion, data.table, {8, 32, 80, 0.5}, opts);
    REQUIRE(result.epoch_losses.size() == kEmotionEpochs);
    CHECK(result.skipped == 0);
    std::size_t correct = 0;
    double nll = 0.0;
    nn::Rng unused(0);
    for (const auto& ex : data.emotion) {
        auto lp = forward_emotion(result.model, ex.tokens, data.table, false, unused);
        correct += argmax_emotion(lp) == ex.label;
        nll += nn::nll_loss(lp, index_of(ex.label));
    }
    CHECK(correct == 10);
    CHECK(nll / 10.0 < 0.05);
    CHECK(result.epoch_losses.back() < result.epoch_losses.front());
}

TEST_CASE("emotion training is seeded and skips unusable examples")
{
    auto data = testing::make_toy_data(5);
    data.emotion.push_back({{"unknownword"}, Emotion::Joy});
    TrainOptions opts;
    opts.epochs = 3;
    opts.seed = 11;
    std::size_t calls = 0;
    opts.on_epoch = [&](std::size_t, double) { ++calls; };
    auto a = train_emotion(data.emotion, data.table, {8, 4, 5, 0.5}, opts);
    auto b = train_emotion(data.emotion, data.table, {8, 4, 5, 0.5}, opts);
    CHECK(a.skipped == 1);
    CHECK(calls == 6);
    CHECK(a.epoch_losses == b.epoch_losses);
    auto pa = a.model.params();
    auto pb = b.model.params();
    for (std::size_t k = 0; k < pa.size(); ++k)
        CHECK(std::equal(pa[k].value.begin(), pa[k].value.end(), pb[k].value.begin()));

    std::vector<EmotionTrainExample> useless{{{"nope"}, Emotion::Joy}};
    CHECK_THROWS_AS(train_emotion(useless, data.table, {8, 4, 5, 0.5}, opts), std::invalid_argument);
}
