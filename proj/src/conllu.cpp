#include "ecpe/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ecpe/error.hpp"

namespace ecpe {

namespace {

struct RawToken {
    std::size_t id;    // 1-based CoNLL-U id
    std::size_t head;  // 0 for root
    std::string form, upos, deprel;
    std::size_t line;
};

std::string at_line(std::size_t n) { return "conllu line " + std::to_string(n) + ": "; }

bool parse_index(std::string_view s, std::size_t& out)
{
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

class SentenceBuilder {
public:
    explicit SentenceBuilder(std::vector<Sentence>& out) : out_(out) {}

    void comment(std::string_view line)
    {
        auto body = line.substr(1);
        while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        constexpr std::string_view key = "sent_id";
        if (body.substr(0, key.size()) != key) return;
        body.remove_prefix(key.size());
        while (!body.empty() && (body.front() == ' ' || body.front() == '=')) body.remove_prefix(1);
        while (!body.empty() && (body.back() == ' ' || body.back() == '\r')) body.remove_suffix(1);
        sent_id_ = std::string(body);
    }

    void token(RawToken t) { tokens_.push_back(std::move(t)); }

    void finish(std::size_t line)
    {
        if (tokens_.empty()) {
            sent_id_.clear();
            return;
        }
        Sentence s;
        s.sent_id = sent_id_;
        assign_ids(s);
        const std::size_t n = tokens_.size();
        std::map<std::size_t, std::size_t> position;  // CoNLL-U id -> 0-based index
        for (std::size_t i = 0; i < n; ++i) {
            if (!position.emplace(tokens_[i].id, i).second)
                throw DataError(at_line(tokens_[i].line) + "duplicate token id " + std::to_string(tokens_[i].id));
        }
        std::size_t roots = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& raw = tokens_[i];
            Token t{i, raw.form, raw.upos, Token::kNoHead, raw.deprel};
            if (raw.head == 0) {
                ++roots;
                if (!iequals(raw.deprel, "root"))
                    throw DataError(at_line(raw.line) + "HEAD=0 with relation '" + raw.deprel + "'");
            } else {
                auto it = position.find(raw.head);
                if (it == position.end())
                    throw DataError(at_line(raw.line) + "HEAD " + std::to_string(raw.head) + " out of range");
                t.head = it->second;
            }
            s.tokens.push_back(std::move(t));
        }
        if (roots != 1)
            throw DataError(at_line(line) + "sentence has " + std::to_string(roots) + " roots, expected 1");
        check_acyclic(s);
        out_.push_back(std::move(s));
        tokens_.clear();
        sent_id_.clear();
    }

private:
    void assign_ids(Sentence& s)
    {
        const auto dot = sent_id_.rfind('.');
        std::size_t idx = 0;
        if (dot != std::string::npos && parse_index(std::string_view(sent_id_).substr(dot + 1), idx)) {
            s.review_id = sent_id_.substr(0, dot);
            s.sentence_index = idx;
        } else {
            s.review_id = sent_id_;
            s.sentence_index = seen_[sent_id_]++;
        }
    }

    void check_acyclic(const Sentence& s) const
    {
        const std::size_t n = s.size();
        // 0 = unvisited, 1 = on the current path, 2 = known to reach the root
        std::vector<char> state(n, 0);
        for (std::size_t start = 0; start < n; ++start) {
            std::vector<std::size_t> path;
            std::size_t cur = start;
            while (cur != Token::kNoHead && state[cur] == 0) {
                state[cur] = 1;
                path.push_back(cur);
                cur = s.tokens[cur].head;
            }
            if (cur != Token::kNoHead && state[cur] == 1)
                throw DataError("cyclic head graph in sentence '" + s.sent_id + "' at token " +
                                std::to_string(cur + 1));
            for (auto p : path) state[p] = 2;
        }
    }

    std::vector<Sentence>& out_;
    std::vector<RawToken> tokens_;
    std::string sent_id_;
    std::map<std::string, std::size_t> seen_;
};

}  // namespace

std::vector<Sentence> parse_conllu(std::string_view text)
{
    std::vector<Sentence> out;
    SentenceBuilder builder(out);
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line.empty()) {
            builder.finish(line_no);
            continue;
        }
        if (line.front() == '#') {
            builder.comment(line);
            continue;
        }
        std::vector<std::string_view> cols;
        for (std::size_t tab; (tab = line.find('\t')) != std::string_view::npos; line.remove_prefix(tab + 1))
            cols.push_back(line.substr(0, tab));
        cols.push_back(line);
        if (cols.size() != 10)
            throw DataError(at_line(line_no) + "expected 10 columns, got " + std::to_string(cols.size()));

        const auto id = cols[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;
        std::size_t idx = 0;
        if (!parse_index(id, idx) || idx == 0)
            throw DataError(at_line(line_no) + "non-integer token id '" + std::string(id) + "'");
        std::size_t head = 0;
        if (!parse_index(cols[6], head))
            throw DataError(at_line(line_no) + "bad HEAD '" + std::string(cols[6]) + "'");
        if (head == idx) throw DataError(at_line(line_no) + "token " + std::to_string(idx) + " is its own head (cycle)");
        builder.token({idx, head, std::string(cols[1]), std::string(cols[3]), std::string(cols[7]), line_no});
    }
    builder.finish(line_no);
    return out;
}

std::vector<Sentence> load_conllu(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CoNLL-U file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_conllu(buf.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string to_conllu(const Sentence& sentence)
{
    std::string out;
    if (!sentence.sent_id.empty()) out += "# sent_id = " + sentence.sent_id + "\n";
    std::string text;
    for (const auto& t : sentence.tokens) {
        if (!text.empty()) text += ' ';
        text += t.text;
    }
    out += "# text = " + text + "\n";
    for (const auto& t : sentence.tokens) {
        const std::size_t head = t.is_root() ? 0 : t.head + 1;
        out += std::to_string(t.index + 1) + '\t' + t.text + "\t_\t" + t.upos + "\t_\t_\t" + std::to_string(head) +
               '\t' + t.deprel + "\t_\t_\n";
    }
    out += '\n';
    return out;
}

}  // namespace ecpe
