#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ecpe/conllu.hpp"

namespace ecpe {

struct ClauseSpan {
    std::size_t start = 0;  // inclusive
    std::size_t end = 0;    // inclusive
    std::size_t verb = 0;   // clausal head

    bool same_range(const ClauseSpan& o) const { return start == o.start && end == o.end; }
    bool operator==(const ClauseSpan&) const = default;
};

struct Clause {
    ClauseSpan span;
    std::vector<std::string> words;
    std::string review_id;
    std::size_t sentence_index = 0;

    std::string text() const;
};

std::size_t find_root(const Sentence& s);

// Tokens other than the root tagged VERB whose head is the root.
std::vector<std::size_t> find_other_verbs(const Sentence& s, std::size_t root);

// Span over the verb and its direct dependents, ignoring dependents that are
// themselves clausal heads (the root or one of find_other_verbs).
ClauseSpan clause_span_for_verb(const Sentence& s, std::size_t verb);

// One clause per clausal head, duplicate spans dropped, sorted by (start, end).
std::vector<Clause> extract_clauses(const Sentence& s);

}  // namespace ecpe
