#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecpe/cause_model.hpp"
#include "ecpe/clauses.hpp"
#include "ecpe/clustering.hpp"
#include "ecpe/conllu.hpp"
#include "ecpe/corpus.hpp"
#include "ecpe/embeddings.hpp"
#include "ecpe/emotion_model.hpp"

namespace ecpe {

struct PipelineConfig {
    std::filesystem::path raw_embeddings;
    std::filesystem::path aware_embeddings;
    std::filesystem::path corpus;
    std::filesystem::path parses;
    std::filesystem::path emotion_model;
    std::filesystem::path cause_model;
    double threshold = kMergeThreshold;
    std::size_t top_k = kDefaultTopK;
    std::size_t emotion_epochs = kEmotionEpochs;
    std::size_t cause_epochs = kCauseEpochs;
    nn::SgdConfig sgd;
    std::size_t emotion_hidden = 256;
    std::size_t cause_hidden = 1024;
    std::size_t mid = 80;
    std::uint64_t seed = 0;
};

// A corpus record together with its parsed sentences in sentence order.
struct ReviewDocument {
    const ReviewRecord* record = nullptr;
    std::vector<const Sentence*> sentences;

    std::vector<std::string> tokens() const;
    std::vector<Clause> clauses() const;
};

// Matches sentences to records by the record's sent_ids, or by review id
// when sent_ids is empty. Records without sentences keep an empty list.
std::vector<ReviewDocument> align_reviews(std::span<const ReviewRecord> records, std::span<const Sentence> sentences);

// Reviews with a gold emotion, tokenized from their parses.
std::vector<EmotionTrainExample> emotion_examples(std::span<const ReviewDocument> docs);

// One example per clause of every gold-annotated review: label 1 for the
// clause whose span equals the gold cause, emotion probabilities one-hot on
// the gold emotion.
std::vector<CauseTrainExample> cause_examples(std::span<const ReviewDocument> docs);

struct ReviewOutcome {
    std::string review_id;
    std::string product_id;
    Emotion emotion;
    nn::Vector probs;
    Clause cause;
    double score = 0.0;
};

struct SummaryReport {
    std::size_t total = 0;
    std::size_t processed = 0;
    std::size_t skipped = 0;
    double threshold = kMergeThreshold;
    std::vector<ReviewOutcome> outcomes;  // processed reviews in corpus order
    std::vector<ClusterEntry> entries;    // parallel to outcomes
    std::vector<ClusterSet> groups;
};

struct PipelineModels {
    const EmbeddingTable& raw;
    const EmbeddingTable& aware;
    const EmotionClassifier& emotion;
    const CauseScorer& cause;
};

// Per review: clauses, emotion probabilities, cause clause and its vector;
// then clustering per (product, predicted emotion). Reviews failing any
// stage are counted as skipped.
SummaryReport summarize_reviews(std::span<const ReviewDocument> docs, const PipelineModels& models,
                                double threshold = kMergeThreshold);

// Loads every input named in cfg and runs summarize_reviews. Throws
// DataError when a file is missing or malformed.
SummaryReport run_pipeline(const PipelineConfig& cfg);

nlohmann::ordered_json report_json(const SummaryReport& report);
std::string report_text(const SummaryReport& report);
// Clustered member vectors projected to 2-D per group, for plotting.
nlohmann::ordered_json projection_json(const SummaryReport& report);

}  // namespace ecpe
