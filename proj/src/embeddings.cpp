#include "ecpe/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ecpe/error.hpp"
#include "ecpe/kernels.hpp"

namespace ecpe {

namespace {

std::vector<std::string_view> split_spaces(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out)
{
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string format_double(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string location(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim)
{
    if (dim == 0) throw DataError("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string word, std::span<const double> values)
{
    if (values.size() != dim_)
        throw DataError("dimension mismatch for '" + word + "': expected " + std::to_string(dim_) +
                        ", got " + std::to_string(values.size()));
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; }))
        throw DataError("zero vector for '" + word + "'");
    if (index_.contains(word)) throw DataError("duplicate word '" + word + "'");
    index_.emplace(word, words_.size());
    words_.push_back(std::move(word));
    data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view word) const
{
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return row(it->second);
}

std::span<const double> EmbeddingTable::at(std::string_view word) const
{
    auto v = find(word);
    if (!v) throw DataError("unknown word '" + std::string(word) + "'");
    return *v;
}

bool EmbeddingTable::operator==(const EmbeddingTable& other) const
{
    return dim_ == other.dim_ && words_ == other.words_ && data_ == other.data_;
}

EmbeddingTable read_word_embeddings(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw DataError("embedding file is empty");
    const auto header = split_spaces(line);
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0)
        throw DataError("malformed embedding header '" + line + "', expected '<count> <dim>'");

    EmbeddingTable table(dim);
    std::vector<double> values(dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_spaces(line);
        if (fields.empty()) continue;
        if (table.size() == count)
            throw DataError(location(line_no) + "more rows than the header count " + std::to_string(count));
        if (fields.size() != dim + 1)
            throw DataError(location(line_no) + "dimension mismatch: expected " + std::to_string(dim) +
                            " values, got " + std::to_string(fields.size() - 1));
        for (std::size_t i = 0; i < dim; ++i)
            if (!parse_number(fields[i + 1], values[i]))
                throw DataError(location(line_no) + "bad number '" + std::string(fields[i + 1]) + "'");
        try {
            table.add(std::string(fields[0]), values);
        } catch (const DataError& e) {
            throw DataError(location(line_no) + e.what());
        }
    }
    if (table.size() != count)
        throw DataError("header announces " + std::to_string(count) + " rows, file has " +
                        std::to_string(table.size()));
    return table;
}

EmbeddingTable load_word_embeddings(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file " + path.string());
    try {
        return read_word_embeddings(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_word_embeddings(const EmbeddingTable& table, std::ostream& out)
{
    out << table.size() << ' ' << table.dim() << '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.words()[i];
        for (double v : table.row(i)) out << ' ' << format_double(v);
        out << '\n';
    }
}

void save_word_embeddings(const EmbeddingTable& table, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    write_word_embeddings(table, out);
}

void EmotionLexicon::add(std::string word, Emotion emotion, double intensity)
{
    if (!(intensity >= 0.0 && intensity <= 1.0))
        throw DataError("intensity " + format_double(intensity) + " for '" + word + "' outside [0,1]");
    entries_[std::move(word)].push_back({emotion, intensity});
}

const std::vector<LexiconEntry>* EmotionLexicon::find(std::string_view word) const
{
    auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

double EmotionLexicon::max_intensity(std::string_view word) const
{
    const auto* entries = find(word);
    if (!entries) throw DataError("'" + std::string(word) + "' is not in the lexicon");
    double best = 0.0;
    for (const auto& e : *entries) best = std::max(best, e.intensity);
    return best;
}

Emotion EmotionLexicon::dominant_emotion(std::string_view word) const
{
    const auto* entries = find(word);
    if (!entries) throw DataError("'" + std::string(word) + "' is not in the lexicon");
    const LexiconEntry* best = &entries->front();
    for (const auto& e : *entries)
        if (e.intensity > best->intensity) best = &e;
    return best->emotion;
}

EmotionLexicon read_emotion_lexicon(std::istream& in)
{
    EmotionLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (std::size_t tab; (tab = rest.find('\t')) != std::string_view::npos; rest.remove_prefix(tab + 1))
            fields.push_back(rest.substr(0, tab));
        fields.push_back(rest);
        if (fields.size() != 3 || fields[0].empty())
            throw DataError(location(line_no) + "expected '<word>\\t<emotion>\\t<intensity>'");
        auto emotion = parse_emotion(fields[1]);
        if (!emotion) throw DataError(location(line_no) + "unknown emotion label '" + std::string(fields[1]) + "'");
        double intensity = 0.0;
        if (!parse_number(fields[2], intensity))
            throw DataError(location(line_no) + "bad intensity '" + std::string(fields[2]) + "'");
        try {
            lexicon.add(std::string(fields[0]), *emotion, intensity);
        } catch (const DataError& e) {
            throw DataError(location(line_no) + e.what());
        }
    }
    return lexicon;
}

EmotionLexicon load_emotion_lexicon(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file " + path.string());
    try {
        return read_emotion_lexicon(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_emotion_lexicon(const EmotionLexicon& lexicon, std::ostream& out)
{
    for (const auto& [word, entries] : lexicon.entries())
        for (const auto& e : entries)
            out << word << '\t' << emotion_name(e.emotion) << '\t' << format_double(e.intensity) << '\n';
}

double cosine_similarity(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw DataError("cosine_similarity: length mismatch");
    const double na = kernels::norm(a);
    const double nb = kernels::norm(b);
    if (na == 0.0 || nb == 0.0) throw DataError("cosine_similarity: zero-norm input");
    return std::clamp(kernels::dot(a, b) / (na * nb), -1.0, 1.0);
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                                   std::vector<double> values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values))
{
    if (values_.size() != rows_.size() * cols_.size()) throw DataError("similarity matrix shape mismatch");
    for (std::size_t i = 0; i < rows_.size(); ++i) row_index_.emplace(rows_[i], i);
}

std::optional<std::size_t> SimilarityMatrix::row_of(std::string_view word) const
{
    auto it = row_index_.find(std::string(word));
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
}

SimilarityMatrix build_similarity_matrix(const EmbeddingTable& table, const EmotionLexicon& lexicon)
{
    std::vector<std::string> cols;
    std::vector<double> col_data;
    for (const auto& [word, entries] : lexicon.entries()) {
        auto v = table.find(word);
        if (!v) continue;
        cols.push_back(word);
        col_data.insert(col_data.end(), v->begin(), v->end());
    }
    if (cols.empty()) throw DataError("no lexicon word occurs in the embedding vocabulary");

    kernels::ConstMatrixView vocab{table.data(), table.size(), table.dim()};
    kernels::ConstMatrixView emotion_words{col_data, cols.size(), table.dim()};
    return SimilarityMatrix(table.words(), std::move(cols), kernels::cosine_matrix(vocab, emotion_words));
}

std::vector<ScoredWord> top_k_emotion_words(const SimilarityMatrix& matrix, std::string_view word, std::size_t k)
{
    const auto r = matrix.row_of(word);
    if (!r) throw DataError("'" + std::string(word) + "' is not a similarity-matrix row");
    if (k == 0) return {};

    std::vector<std::size_t> order(matrix.num_cols());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto row = matrix.row(*r);
    const std::size_t keep = std::min(k, order.size());
    // Columns are already in lexicographic order, so index order breaks ties.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (row[a] != row[b]) return row[a] > row[b];
                          return a < b;
                      });
    std::vector<ScoredWord> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back({matrix.col_words()[order[i]], row[order[i]]});
    return out;
}

std::optional<std::vector<double>> blend_emotion_embedding(std::span<const ScoredWord> top,
                                                           const EmbeddingTable& table,
                                                           const EmotionLexicon& lexicon)
{
    if (top.empty()) throw DataError("blend_emotion_embedding: no emotion words given");
    std::vector<double> weights;
    weights.reserve(top.size());
    double total = 0.0;
    for (const auto& s : top) {
        const double w = std::max(s.similarity, 0.0) * lexicon.max_intensity(s.word);
        weights.push_back(w);
        total += w;
    }
    if (total <= 0.0) return std::nullopt;

    std::vector<double> out(table.dim(), 0.0);
    for (std::size_t i = 0; i < top.size(); ++i) {
        const double w = weights[i] / total;
        if (w == 0.0) continue;
        const auto v = table.at(top[i].word);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * v[j];
    }
    return out;
}

std::vector<double> overlay(std::span<const double> original, std::span<const double> emotional)
{
    if (original.size() != emotional.size()) throw DataError("overlay: length mismatch");
    std::vector<double> out(original.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (original[i] + emotional[i]);
    return out;
}

EmbeddingTable build_emotion_aware_table(const EmbeddingTable& table, const EmotionLexicon& lexicon,
                                         std::size_t top_k)
{
    const auto matrix = build_similarity_matrix(table, lexicon);
    EmbeddingTable out(table.dim());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& word = table.words()[i];
        const auto top = top_k_emotion_words(matrix, word, top_k);
        const auto blended = blend_emotion_embedding(top, table, lexicon);
        if (!blended) {
            out.add(word, table.row(i));
            continue;
        }
        auto aware = overlay(table.row(i), *blended);
        // No zero rows in the output table either.
        if (std::all_of(aware.begin(), aware.end(), [](double v) { return v == 0.0; }))
            out.add(word, table.row(i));
        else
            out.add(word, aware);
    }
    return out;
}

}  // namespace ecpe
