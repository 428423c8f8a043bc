#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ecpe/clauses.hpp"
#include "ecpe/corpus.hpp"
#include "ecpe/error.hpp"
#include "ecpe/synthetic.hpp"

using namespace ecpe;

namespace {

std::vector<ReviewRecord> corpus_from(const std::string& text)
{
    std::istringstream in(text);
    return read_corpus(in);
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("corpus records")
{
    auto recs = corpus_from(
        R"({"review_id":"a","product_id":"p","stars":4,"text":"nice"})"
        "\n"
        R"({"review_id":"b","product_id":"p","stars":1,"text":"bad wifi","sent_ids":["b.0"],)"
        R"("gold_emotion":"anger","gold_cause":{"sentence_index":0,"start":0,"end":1}})"
        "\n");
    REQUIRE(recs.size() == 2);
    CHECK_FALSE(recs[0].gold_emotion);
    CHECK(recs[1].gold_emotion == Emotion::Anger);
    CHECK(recs[1].gold_cause == GoldCause{0, 0, 1});
    CHECK(recs[1].sent_ids == std::vector<std::string>{"b.0"});

    std::stringstream buf;
    write_corpus(recs, buf);
    CHECK(read_corpus(buf) == recs);
}

TEST_CASE("corpus schema violations name the line")
{
    const std::string ok = R"({"review_id":"a","product_id":"p","stars":4,"text":"x"})";
    try {
        corpus_from(ok + "\n" + ok + "\n");
        FAIL("duplicate id accepted");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(corpus_from(R"({"review_id":"a","product_id":"p","stars":4,"text":"x","gold_emotion":"joy"})"),
                    DataError);
    CHECK_THROWS_AS(corpus_from(R"({"review_id":"a","product_id":"p","stars":9,"text":"x"})"), DataError);
    CHECK_THROWS_AS(corpus_from(R"({"review_id":"a","stars":4,"text":"x"})"), DataError);
    CHECK_THROWS_AS(corpus_from(R"({"review_id":"a","product_id":"p","stars":4,"text":"x",)"
                                R"("gold_emotion":"boredom","gold_cause":{"sentence_index":0,"start":0,"end":0}})"),
                    DataError);
    CHECK_THROWS_AS(corpus_from("{not json"), DataError);
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}

TEST_CASE("synthetic corpus shape")
{
    auto c = generate_synthetic_corpus({});
    CHECK(c.records.size() == 1000);
    std::map<std::string, int> per_product;
    for (const auto& r : c.records) {
        ++per_product[r.product_id];
        CHECK(r.gold_emotion.has_value());
        CHECK(r.gold_cause.has_value());
    }
    CHECK(per_product.size() == 50);
    for (const auto& [p, n] : per_product) CHECK(n == 20);
    CHECK(c.sentences.size() == 2000);
    CHECK_THROWS_AS(generate_synthetic_corpus({0, 50, 999, 16}), std::invalid_argument);
}

TEST_CASE("synthetic gold causes are extractable clauses naming a marker")
{
    auto c = generate_synthetic_corpus({3, 10, 100, 8});
    const auto& markers = cause_marker_words();
    std::map<std::string, const Sentence*> by_id;
    for (const auto& s : c.sentences) by_id[s.sent_id] = &s;
    for (const auto& r : c.records) {
        const auto& g = *r.gold_cause;
        const auto* s = by_id.at(r.sent_ids.at(g.sentence_index));
        bool found = false;
        for (const auto& cl : extract_clauses(*s)) {
            if (cl.span.start != g.start || cl.span.end != g.end) continue;
            found = true;
            bool marker = false;
            for (const auto& w : cl.words)
                marker = marker || std::find(markers.begin(), markers.end(), w) != markers.end();
            CHECK(marker);
        }
        CHECK(found);
        for (const auto& t : s->tokens) CHECK(c.embeddings.contains(t.text));
    }
}

TEST_CASE("synthetic output is byte-identical for a seed")
{
    const auto base = std::filesystem::temp_directory_path() / "ecpe_synth_test";
    std::filesystem::remove_all(base);
    write_synthetic_corpus(generate_synthetic_corpus({5, 5, 50, 4}), base / "a");
    write_synthetic_corpus(generate_synthetic_corpus({5, 5, 50, 4}), base / "b");
    write_synthetic_corpus(generate_synthetic_corpus({6, 5, 50, 4}), base / "c");
    const auto a = synthetic_paths(base / "a");
    const auto b = synthetic_paths(base / "b");
    const auto c = synthetic_paths(base / "c");
    CHECK(slurp(a.corpus) == slurp(b.corpus));
    CHECK(slurp(a.parses) == slurp(b.parses));
    CHECK(slurp(a.embeddings) == slurp(b.embeddings));
    CHECK(slurp(a.lexicon) == slurp(b.lexicon));
    CHECK(slurp(a.embeddings) != slurp(c.embeddings));
    CHECK(load_corpus(a.corpus).size() == 50);
    CHECK(load_conllu(a.parses).size() == 100);
    std::filesystem::remove_all(base);
}
