#include <doctest.h>

#include "ecpe/conllu.hpp"
#include "ecpe/error.hpp"

using namespace ecpe;

namespace {

std::string row(int id, const char* form, const char* upos, int head, const char* rel)
{
    return std::to_string(id) + "\t" + form + "\t_\t" + upos + "\t_\t_\t" + std::to_string(head) + "\t" + rel +
           "\t_\t_\n";
}

}  // namespace

TEST_CASE("minimal two-token tree")
{
    auto s = parse_conllu(row(1, "dogs", "NOUN", 2, "nsubj") + row(2, "bark", "VERB", 0, "root"));
    REQUIRE(s.size() == 1);
    REQUIRE(s[0].size() == 2);
    CHECK(s[0].tokens[0].head == 1);
    CHECK(s[0].tokens[1].is_root());
    CHECK(s[0].tokens[1].upos == "VERB");
    CHECK(s[0].tokens[0].deprel == "nsubj");
}

TEST_CASE("golden fixture with comments and a multiword token")
{
    auto s = load_conllu(ECPE_FIXTURE_DIR "/golden.conllu");
    REQUIRE(s.size() == 3);
    CHECK(s[0].sent_id == "g1.0");
    CHECK(s[0].review_id == "g1");
    CHECK(s[0].sentence_index == 0);
    CHECK(s[1].review_id == "g1");
    CHECK(s[1].sentence_index == 1);
    CHECK(s[2].review_id == "g2");

    REQUIRE(s[1].size() == 4);
    CHECK(s[1].tokens[1].text == "ca");
    CHECK(s[1].tokens[2].text == "n't");
    CHECK(s[1].tokens[0].head == 3);
    CHECK(s[1].tokens[3].is_root());
    CHECK(s[2].tokens[3].upos == "ADJ");
}

TEST_CASE("empty nodes are skipped")
{
    auto text = row(1, "I", "PRON", 2, "nsubj") + row(2, "left", "VERB", 0, "root") +
                "2.1\tgo\t_\tVERB\t_\t_\t_\t_\t2:conj\t_\n" + row(3, "early", "ADV", 2, "advmod");
    auto s = parse_conllu(text);
    REQUIRE(s.size() == 1);
    CHECK(s[0].size() == 3);
    CHECK(s[0].tokens[2].text == "early");
}

TEST_CASE("sentence ids without a dot count per id")
{
    auto one = row(1, "ok", "INTJ", 0, "root");
    auto s = parse_conllu("# sent_id = r7\n" + one + "\n# sent_id = r7\n" + one + "\n" + one);
    REQUIRE(s.size() == 3);
    CHECK(s[0].review_id == "r7");
    CHECK(s[1].review_id == "r7");
    CHECK(s[1].sentence_index == 1);
    CHECK(s[2].sent_id.empty());
}

TEST_CASE("structural violations are rejected")
{
    CHECK_THROWS_AS(parse_conllu(row(1, "a", "NOUN", 1, "dep")), DataError);
    CHECK_THROWS_AS(parse_conllu(row(1, "a", "NOUN", 2, "dep") + row(2, "b", "NOUN", 1, "dep")), DataError);
    CHECK_THROWS_AS(parse_conllu(row(1, "a", "NOUN", 0, "root") + row(2, "b", "NOUN", 0, "root")), DataError);
    CHECK_THROWS_AS(parse_conllu(row(1, "a", "NOUN", 0, "root") + row(2, "b", "NOUN", 5, "dep")), DataError);
    CHECK_THROWS_AS(parse_conllu("x\ta\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"), DataError);
    CHECK_THROWS_AS(parse_conllu("1\ta\t_\tNOUN\t_\t_\t0\troot\n"), DataError);
    CHECK_THROWS_AS(parse_conllu(row(1, "a", "NOUN", 3, "dep") + row(2, "b", "VERB", 0, "root") +
                                 row(3, "c", "NOUN", 4, "dep") + row(4, "d", "NOUN", 3, "dep")),
                    DataError);
    CHECK_THROWS_AS(load_conllu("/nonexistent/file.conllu"), DataError);
}

TEST_CASE("to_conllu round trips")
{
    auto s = load_conllu(ECPE_FIXTURE_DIR "/golden.conllu");
    std::string text;
    for (const auto& sentence : s) text += to_conllu(sentence) + "\n";
    auto back = parse_conllu(text);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back[i].sent_id == s[i].sent_id);
        REQUIRE(back[i].size() == s[i].size());
        for (std::size_t k = 0; k < s[i].size(); ++k) {
            CHECK(back[i].tokens[k].text == s[i].tokens[k].text);
            CHECK(back[i].tokens[k].head == s[i].tokens[k].head);
            CHECK(back[i].tokens[k].upos == s[i].tokens[k].upos);
        }
    }
}
