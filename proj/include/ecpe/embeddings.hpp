#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ecpe/emotion.hpp"

namespace ecpe {

// Word -> dense vector of fixed dimension. Rows are stored contiguously in
// insertion order; no row may be all zeros.
class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    bool empty() const { return words_.empty(); }

    // Throws DataError on wrong length, zero vector or duplicate word.
    void add(std::string word, std::span<const double> values);

    bool contains(std::string_view word) const { return find(word).has_value(); }
    std::optional<std::span<const double>> find(std::string_view word) const;
    // Throws DataError for an unknown word.
    std::span<const double> at(std::string_view word) const;

    const std::vector<std::string>& words() const { return words_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> data() const { return data_; }

    bool operator==(const EmbeddingTable& other) const;

private:
    std::size_t dim_;
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;
};

EmbeddingTable read_word_embeddings(std::istream& in);
EmbeddingTable load_word_embeddings(const std::filesystem::path& path);
void write_word_embeddings(const EmbeddingTable& table, std::ostream& out);
void save_word_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

struct LexiconEntry {
    Emotion emotion;
    double intensity;
};

class EmotionLexicon {
public:
    // Throws DataError when intensity is outside [0, 1].
    void add(std::string word, Emotion emotion, double intensity);

    const std::vector<LexiconEntry>* find(std::string_view word) const;
    // Largest intensity across the word's emotions; the word must exist.
    double max_intensity(std::string_view word) const;
    // Strongest emotion for the word (first label on equal intensity).
    Emotion dominant_emotion(std::string_view word) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, std::vector<LexiconEntry>, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, std::vector<LexiconEntry>, std::less<>> entries_;
};

EmotionLexicon read_emotion_lexicon(std::istream& in);
EmotionLexicon load_emotion_lexicon(const std::filesystem::path& path);
void write_emotion_lexicon(const EmotionLexicon& lexicon, std::ostream& out);

// dot(a,b) / (|a||b|), clamped to [-1, 1]. Throws DataError on length
// mismatch or a zero-norm input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Cosine similarities between every vocabulary word (rows, table order) and
// every lexicon word that also occurs in the vocabulary (columns, sorted).
class SimilarityMatrix {
public:
    SimilarityMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                     std::vector<double> values);

    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_cols() const { return cols_.size(); }
    const std::vector<std::string>& row_words() const { return rows_; }
    const std::vector<std::string>& col_words() const { return cols_; }

    double at(std::size_t r, std::size_t c) const { return values_[r * cols_.size() + c]; }
    std::optional<std::size_t> row_of(std::string_view word) const;
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_.size(), cols_.size()}; }

private:
    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> row_index_;
};

// Throws DataError when no lexicon word occurs in the table.
SimilarityMatrix build_similarity_matrix(const EmbeddingTable& table, const EmotionLexicon& lexicon);

struct ScoredWord {
    std::string word;
    double similarity;

    bool operator==(const ScoredWord&) const = default;
};

inline constexpr std::size_t kDefaultTopK = 2;

// The k most similar emotion words, similarity descending, ties by word.
// Throws DataError if the word is not a matrix row.
std::vector<ScoredWord> top_k_emotion_words(const SimilarityMatrix& matrix, std::string_view word,
                                            std::size_t k = kDefaultTopK);

// Weighted average of the emotion words' vectors with weights proportional
// to max(sim, 0) * intensity. nullopt when every weight is zero, i.e. the
// word has no emotional context.
std::optional<std::vector<double>> blend_emotion_embedding(std::span<const ScoredWord> top,
                                                           const EmbeddingTable& table,
                                                           const EmotionLexicon& lexicon);

// Elementwise mean. Throws DataError on length mismatch.
std::vector<double> overlay(std::span<const double> original, std::span<const double> emotional);

EmbeddingTable build_emotion_aware_table(const EmbeddingTable& table, const EmotionLexicon& lexicon,
                                         std::size_t top_k = kDefaultTopK);

}  // namespace ecpe
