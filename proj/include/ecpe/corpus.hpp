#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecpe/emotion.hpp"

namespace ecpe {

struct GoldCause {
    std::size_t sentence_index = 0;
    std::size_t start = 0;  // token span, inclusive
    std::size_t end = 0;

    bool operator==(const GoldCause&) const = default;
};

struct ReviewRecord {
    std::string review_id;
    std::string product_id;
    int stars = 0;                       // 1..5
    std::string text;
    std::vector<std::string> sent_ids;   // CoNLL-U sentence ids; empty = match by review id
    std::optional<Emotion> gold_emotion;
    std::optional<GoldCause> gold_cause;

    bool operator==(const ReviewRecord&) const = default;
};

// JSON lines, one record per line, snake_case keys:
//   review_id, product_id, stars, text, sent_ids?, gold_emotion?,
//   gold_cause? = {sentence_index, start, end}
// Throws DataError naming the line on any schema violation.
std::vector<ReviewRecord> read_corpus(std::istream& in);
std::vector<ReviewRecord> load_corpus(const std::filesystem::path& path);
void write_corpus(const std::vector<ReviewRecord>& records, std::ostream& out);

}  // namespace ecpe
