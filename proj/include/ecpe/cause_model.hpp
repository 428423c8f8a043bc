#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecpe/clauses.hpp"
#include "ecpe/embeddings.hpp"
#include "ecpe/emotion_model.hpp"
#include "ecpe/nn.hpp"

namespace ecpe {

struct CauseModelConfig {
    std::size_t embedding_dim = 0;  // d; the encoder sees 8 * d per word
    std::size_t hidden = 1024;      // per direction
    std::size_t mid = 80;
    double dropout = 0.5;
};

// Clause-level cause scorer:
// Bi-LSTM over emotion-scaled word inputs -> final states -> dropout ->
// linear -> ELU -> linear(1) -> sigmoid.
class CauseScorer {
public:
    explicit CauseScorer(const CauseModelConfig& cfg);

    const CauseModelConfig& config() const { return cfg_; }
    void init(nn::Rng& rng) { net_.init(rng); }

    nn::SequenceClassifier& network() { return net_; }
    const nn::SequenceClassifier& network() const { return net_; }
    nn::ParamList params() { return net_.params(); }

    std::vector<std::uint32_t> descriptor() const;
    void save(const std::filesystem::path& path);
    static CauseScorer load(const std::filesystem::path& path);

private:
    CauseModelConfig cfg_;
    nn::SequenceClassifier net_;
};

struct CauseTrainExample {
    std::vector<std::string> tokens;
    nn::Vector emotion_probs;  // length 8
    int label = 0;             // 1 iff annotated cause clause
};

// Per in-vocabulary word v: concat(p_0 v, ..., p_7 v) in label order.
// Throws DataError when every token is out of vocabulary.
std::vector<nn::Vector> emotion_scaled_inputs(std::span<const std::string> tokens, std::span<const double> probs,
                                              const EmbeddingTable& table);

double score_clause(const CauseScorer& model, std::span<const nn::Vector> inputs, bool train, nn::Rng& rng);
double score_clause(const CauseScorer& model, std::span<const std::string> tokens, std::span<const double> probs,
                    const EmbeddingTable& table, bool train, nn::Rng& rng);

// BCE loss on one example; accumulates gradients into the model.
double cause_loss_and_grad(CauseScorer& model, std::span<const nn::Vector> inputs, int label, nn::Rng& rng);

struct CauseSelection {
    std::size_t clause_index;
    double score;
    // Per-clause scores, NaN where a clause could not be scored.
    std::vector<double> scores;
};

// Eval-mode argmax over scorable clauses, ties to the lowest index. Clauses
// with only unknown words are skipped; throws DataError when none remain.
CauseSelection select_cause_clause(const CauseScorer& model, std::span<const Clause> clauses,
                                   std::span<const double> probs, const EmbeddingTable& table);

struct CauseTrainResult {
    CauseScorer model;
    std::vector<double> epoch_losses;
    std::size_t skipped = 0;
    bool single_label = false;  // degenerate data set: only one label present
};

inline constexpr std::size_t kCauseEpochs = 50;

CauseTrainResult train_cause(std::span<const CauseTrainExample> examples, const EmbeddingTable& table,
                             const CauseModelConfig& cfg, const TrainOptions& opts);

}  // namespace ecpe
