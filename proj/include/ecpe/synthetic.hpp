#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecpe/conllu.hpp"
#include "ecpe/corpus.hpp"
#include "ecpe/embeddings.hpp"

namespace ecpe {

struct SyntheticConfig {
    std::uint64_t seed = 0;
    std::size_t products = 50;
    std::size_t reviews = 1000;   // split evenly across products
    std::size_t dim = 16;         // embedding dimension
};

// A template-built review corpus with matching parses, word vectors and an
// emotion lexicon. Each product carries two emotions; each (product,
// emotion) pair draws its causes from two topics, and every review plants
// one emotion word and one "because ..." cause clause naming its topic's
// marker noun.
struct SyntheticCorpus {
    std::vector<ReviewRecord> records;
    std::vector<Sentence> sentences;
    EmbeddingTable embeddings{1};
    EmotionLexicon lexicon;
};

// Throws std::invalid_argument if reviews is not a positive multiple of
// 2 * products.
SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg);

// Marker nouns of every cause topic the generator can plant.
const std::vector<std::string>& cause_marker_words();

struct SyntheticPaths {
    std::filesystem::path corpus, parses, embeddings, lexicon;
};

SyntheticPaths synthetic_paths(const std::filesystem::path& dir);
void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

}  // namespace ecpe
