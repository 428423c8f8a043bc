#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ecpe {

struct Token {
    static constexpr std::size_t kNoHead = std::numeric_limits<std::size_t>::max();

    std::size_t index = 0;        // 0-based position in the sentence
    std::string text;
    std::string upos;
    std::size_t head = kNoHead;   // kNoHead marks the root
    std::string deprel;

    bool is_root() const { return head == kNoHead; }
};

struct Sentence {
    std::vector<Token> tokens;
    std::string sent_id;          // raw "# sent_id" value, may be empty
    std::string review_id;        // sent_id up to the last '.'
    std::size_t sentence_index = 0;

    std::size_t size() const { return tokens.size(); }
};

// Parses CoNLL-U. Multiword-token ranges ("3-4") and empty nodes ("5.1")
// are skipped; surviving tokens are reindexed from 0. Sentence ids of the
// form "<review_id>.<n>" populate review_id and sentence_index; otherwise
// review_id is the whole sent_id and sentence_index counts sentences with
// that id. Throws DataError on any structural violation.
std::vector<Sentence> parse_conllu(std::string_view text);
std::vector<Sentence> load_conllu(const std::filesystem::path& path);

std::string to_conllu(const Sentence& sentence);

}  // namespace ecpe
