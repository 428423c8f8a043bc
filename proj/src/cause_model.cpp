#include "ecpe/cause_model.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecpe/error.hpp"

namespace ecpe {

namespace {

constexpr std::uint32_t kCauseKind = 2;

}  // namespace

CauseScorer::CauseScorer(const CauseModelConfig& cfg)
    : cfg_(cfg), net_({kNumEmotions * cfg.embedding_dim, cfg.hidden, cfg.mid, 1, cfg.dropout})
{
}

std::vector<std::uint32_t> CauseScorer::descriptor() const
{
    return {kCauseKind, static_cast<std::uint32_t>(cfg_.embedding_dim), static_cast<std::uint32_t>(cfg_.hidden),
            static_cast<std::uint32_t>(cfg_.mid), 1u};
}

void CauseScorer::save(const std::filesystem::path& path) { nn::save_params(path, descriptor(), params()); }

CauseScorer CauseScorer::load(const std::filesystem::path& path)
{
    const auto desc = nn::read_descriptor(path);
    if (desc.size() != 5 || desc[0] != kCauseKind || desc[4] != 1)
        throw DataError(path.string() + ": not a cause model");
    CauseScorer model({desc[1], desc[2], desc[3]});
    nn::load_params(path, desc, model.params());
    return model;
}

std::vector<nn::Vector> emotion_scaled_inputs(std::span<const std::string> tokens, std::span<const double> probs,
                                              const EmbeddingTable& table)
{
    if (probs.size() != kNumEmotions) throw DataError("emotion_scaled_inputs: expected 8 probabilities");
    const std::size_t d = table.dim();
    std::vector<nn::Vector> out;
    for (const auto& t : tokens) {
        const auto v = table.find(t);
        if (!v) continue;
        nn::Vector x(kNumEmotions * d);
        for (std::size_t e = 0; e < kNumEmotions; ++e)
            for (std::size_t j = 0; j < d; ++j) x[e * d + j] = probs[e] * (*v)[j];
        out.push_back(std::move(x));
    }
    if (out.empty()) throw DataError("clause has no in-vocabulary tokens");
    return out;
}

double score_clause(const CauseScorer& model, std::span<const nn::Vector> inputs, bool train, nn::Rng& rng)
{
    const auto trace = model.network().forward(inputs, train, rng);
    return nn::sigmoid(trace.logits[0]);
}

double score_clause(const CauseScorer& model, std::span<const std::string> tokens, std::span<const double> probs,
                    const EmbeddingTable& table, bool train, nn::Rng& rng)
{
    return score_clause(model, emotion_scaled_inputs(tokens, probs, table), train, rng);
}

double cause_loss_and_grad(CauseScorer& model, std::span<const nn::Vector> inputs, int label, nn::Rng& rng)
{
    auto& net = model.network();
    const auto trace = net.forward(inputs, true, rng);
    const double p = nn::sigmoid(trace.logits[0]);
    // d(BCE o sigmoid)/dz = p - y
    const double dz = p - static_cast<double>(label);
    net.backward(inputs, trace, std::span<const double>(&dz, 1));
    return nn::bce_loss(p, label);
}

CauseSelection select_cause_clause(const CauseScorer& model, std::span<const Clause> clauses,
                                   std::span<const double> probs, const EmbeddingTable& table)
{
    if (clauses.empty()) throw DataError("select_cause_clause: no clauses");
    nn::Rng unused(0);  // eval mode draws nothing
    CauseSelection sel{0, -1.0, std::vector<double>(clauses.size(), std::numeric_limits<double>::quiet_NaN())};
    bool any = false;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        std::vector<nn::Vector> inputs;
        try {
            inputs = emotion_scaled_inputs(clauses[i].words, probs, table);
        } catch (const DataError&) {
            continue;
        }
        const double s = score_clause(model, inputs, false, unused);
        sel.scores[i] = s;
        if (!any || s > sel.score) {
            sel.clause_index = i;
            sel.score = s;
            any = true;
        }
    }
    if (!any) throw DataError("select_cause_clause: no scorable clause");
    return sel;
}

CauseTrainResult train_cause(std::span<const CauseTrainExample> examples, const EmbeddingTable& table,
                             const CauseModelConfig& cfg, const TrainOptions& opts)
{
    struct Prepared {
        std::vector<nn::Vector> inputs;
        int label;
    };
    std::vector<Prepared> data;
    std::size_t skipped = 0;
    std::size_t positives = 0;
    for (const auto& ex : examples) {
        if (ex.label != 0 && ex.label != 1) throw DataError("cause label must be 0 or 1");
        try {
            data.push_back({emotion_scaled_inputs(ex.tokens, ex.emotion_probs, table), ex.label});
            positives += static_cast<std::size_t>(ex.label);
        } catch (const DataError&) {
            ++skipped;
        }
    }
    if (data.empty()) throw std::invalid_argument("train_cause: no usable training examples");
    const bool single_label = positives == 0 || positives == data.size();
    if (single_label) std::cerr << "warning: cause training data contains a single label\n";

    nn::Rng rng(opts.seed);
    CauseScorer model(cfg);
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
            total += cause_loss_and_grad(model, data[idx].inputs, data[idx].label, rng);
            sgd.step(params);
        }
        const double mean = total / static_cast<double>(data.size());
        losses.push_back(mean);
        if (opts.on_epoch) opts.on_epoch(epoch, mean);
    }
    return {std::move(model), std::move(losses), skipped, single_label};
}

}  // namespace ecpe
