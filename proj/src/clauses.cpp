#include "ecpe/clauses.hpp"

#include <algorithm>

namespace ecpe {

std::string Clause::text() const
{
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::size_t find_root(const Sentence& s)
{
    for (const auto& t : s.tokens)
        if (t.is_root()) return t.index;
    return 0;  // unreachable for sentences produced by parse_conllu
}

std::vector<std::size_t> find_other_verbs(const Sentence& s, std::size_t root)
{
    std::vector<std::size_t> out;
    for (const auto& t : s.tokens)
        if (t.index != root && t.upos == "VERB" && t.head == root) out.push_back(t.index);
    return out;
}

namespace {

bool is_clausal_head(std::size_t idx, std::size_t root, const std::vector<std::size_t>& verbs)
{
    return idx == root || std::binary_search(verbs.begin(), verbs.end(), idx);
}

ClauseSpan span_with_heads(const Sentence& s, std::size_t verb, std::size_t root,
                           const std::vector<std::size_t>& verbs)
{
    ClauseSpan span{verb, verb, verb};
    for (const auto& t : s.tokens) {
        if (t.head != verb || is_clausal_head(t.index, root, verbs)) continue;
        span.start = std::min(span.start, t.index);
        span.end = std::max(span.end, t.index);
    }
    return span;
}

}  // namespace

ClauseSpan clause_span_for_verb(const Sentence& s, std::size_t verb)
{
    const auto root = find_root(s);
    return span_with_heads(s, verb, root, find_other_verbs(s, root));
}

std::vector<Clause> extract_clauses(const Sentence& s)
{
    if (s.tokens.empty()) return {};
    const auto root = find_root(s);
    const auto verbs = find_other_verbs(s, root);

    std::vector<ClauseSpan> spans;
    spans.push_back(span_with_heads(s, root, root, verbs));
    for (auto v : verbs) spans.push_back(span_with_heads(s, v, root, verbs));

    std::stable_sort(spans.begin(), spans.end(), [](const ClauseSpan& a, const ClauseSpan& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
    spans.erase(std::unique(spans.begin(), spans.end(),
                            [](const ClauseSpan& a, const ClauseSpan& b) { return a.same_range(b); }),
                spans.end());

    std::vector<Clause> out;
    out.reserve(spans.size());
    for (const auto& span : spans) {
        Clause c;
        c.span = span;
        c.review_id = s.review_id;
        c.sentence_index = s.sentence_index;
        for (std::size_t i = span.start; i <= span.end; ++i) c.words.push_back(s.tokens[i].text);
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace ecpe
