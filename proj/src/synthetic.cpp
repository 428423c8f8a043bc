#include "ecpe/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>

#include "ecpe/error.hpp"
#include "ecpe/nn.hpp"

namespace ecpe {

namespace {

struct CauseTopic {
    std::string_view noun;
    std::array<std::string_view, 2> verbs;
    std::array<std::string_view, 2> adverbs;
};

// First eight are complaints, last eight are praise.
constexpr std::array<CauseTopic, 16> kTopics = {{
    {"battery", {"died", "drained"}, {"quickly", "overnight"}},
    {"screen", {"cracked", "shattered"}, {"immediately", "easily"}},
    {"handle", {"broke", "snapped"}, {"suddenly", "instantly"}},
    {"seller", {"ignored", "refused"}, {"repeatedly", "rudely"}},
    {"cord", {"frayed", "melted"}, {"dangerously", "badly"}},
    {"pump", {"leaked", "dripped"}, {"constantly", "everywhere"}},
    {"app", {"crashed", "froze"}, {"nightly", "daily"}},
    {"fan", {"rattled", "buzzed"}, {"loudly", "noisily"}},
    {"delivery", {"arrived", "came"}, {"early", "promptly"}},
    {"motor", {"runs", "hums"}, {"quietly", "smoothly"}},
    {"lid", {"seals", "closes"}, {"tightly", "securely"}},
    {"blades", {"chop", "slice"}, {"finely", "evenly"}},
    {"setup", {"went", "finished"}, {"effortlessly", "simply"}},
    {"support", {"answered", "helped"}, {"kindly", "patiently"}},
    {"finish", {"shines", "gleams"}, {"brightly", "beautifully"}},
    {"warranty", {"covered", "protected"}, {"fully", "generously"}},
}};
constexpr std::size_t kNegativeTopics = 8;

struct EmotionWord {
    std::string_view word;
    double intensity;
};

// Indexed by Emotion label order.
constexpr std::array<std::array<EmotionWord, 3>, kNumEmotions> kEmotionWords = {{
    {{{"furious", 0.964}, {"angry", 0.828}, {"enraged", 0.938}}},
    {{{"eager", 0.734}, {"hopeful", 0.688}, {"expectant", 0.711}}},
    {{{"disgusted", 0.906}, {"repulsed", 0.875}, {"revolted", 0.859}}},
    {{{"scared", 0.797}, {"afraid", 0.766}, {"terrified", 0.953}}},
    {{{"happy", 0.812}, {"delighted", 0.891}, {"thrilled", 0.922}}},
    {{{"sad", 0.844}, {"disappointed", 0.703}, {"heartbroken", 0.969}}},
    {{{"surprised", 0.781}, {"amazed", 0.812}, {"astonished", 0.875}}},
    {{{"confident", 0.719}, {"reassured", 0.656}, {"secure", 0.625}}},
}};

constexpr std::array<std::string_view, 25> kProductNouns = {
    "blender", "kettle", "toaster", "vacuum", "headset", "speaker", "lamp", "heater", "camera",
    "printer", "router", "keyboard", "mouse", "monitor", "charger", "drill", "mixer", "grill",
    "scale", "watch", "tablet", "projector", "humidifier", "juicer", "fridge",
};

constexpr std::array<std::string_view, 5> kDays = {"monday", "tuesday", "friday", "saturday", "sunday"};

struct TokenSpec {
    std::string text;
    std::string upos;
    std::size_t head;  // 1-based, 0 = root
    std::string deprel;
};

struct SentenceSpec {
    std::vector<TokenSpec> tokens;
    std::size_t cause_start = 0, cause_end = 0;  // inclusive, 0-based
};

bool is_positive(Emotion e)
{
    return e == Emotion::Joy || e == Emotion::Trust || e == Emotion::Anticipation;
}

int stars_for(Emotion e, nn::Rng& rng)
{
    switch (e) {
    case Emotion::Joy:
    case Emotion::Trust:
    case Emotion::Anticipation: return 4 + static_cast<int>(rng.below(2));
    case Emotion::Surprise: return 3 + static_cast<int>(rng.below(2));
    default: return 1 + static_cast<int>(rng.below(2));
    }
}

SentenceSpec intro_sentence(std::string_view product, nn::Rng& rng)
{
    const std::string p(product);
    switch (rng.below(3)) {
    case 0:
        return {{{"i", "PRON", 2, "nsubj"},
                 {"bought", "VERB", 0, "root"},
                 {"this", "DET", 4, "det"},
                 {p, "NOUN", 2, "obj"},
                 {"last", "ADJ", 6, "amod"},
                 {"week", "NOUN", 2, "obl:tmod"}}};
    case 1:
        return {{{"my", "PRON", 2, "nmod:poss"},
                 {p, "NOUN", 3, "nsubj"},
                 {"arrived", "VERB", 0, "root"},
                 {"on", "ADP", 5, "case"},
                 {std::string(kDays[rng.below(kDays.size())]), "PROPN", 3, "obl"}}};
    default:
        return {{{"i", "PRON", 2, "nsubj"},
                 {"bought", "VERB", 0, "root"},
                 {"this", "DET", 4, "det"},
                 {p, "NOUN", 2, "obj"},
                 {"last", "ADJ", 6, "amod"},
                 {"week", "NOUN", 2, "obl:tmod"},
                 {"and", "CCONJ", 8, "cc"},
                 {"used", "VERB", 2, "conj"},
                 {"it", "PRON", 8, "obj"},
                 {"daily", "ADV", 8, "advmod"}}};
    }
}

SentenceSpec emotion_sentence(std::string_view emotion_word, const CauseTopic& topic, nn::Rng& rng)
{
    const std::string emo(emotion_word);
    const std::string noun(topic.noun);
    const std::string verb(topic.verbs[rng.below(2)]);
    const std::string adv(topic.adverbs[rng.below(2)]);
    switch (rng.below(3)) {
    case 0:  // i felt EMO because the NOUN VERB ADV
        return {{{"i", "PRON", 2, "nsubj"},
                 {"felt", "VERB", 0, "root"},
                 {emo, "ADJ", 2, "xcomp"},
                 {"because", "SCONJ", 7, "mark"},
                 {"the", "DET", 6, "det"},
                 {noun, "NOUN", 7, "nsubj"},
                 {verb, "VERB", 2, "advcl"},
                 {adv, "ADV", 7, "advmod"}},
                3, 7};
    case 1:  // i am EMO because the NOUN VERB ADV  (adjectival root)
        return {{{"i", "PRON", 3, "nsubj"},
                 {"am", "AUX", 3, "cop"},
                 {emo, "ADJ", 0, "root"},
                 {"because", "SCONJ", 7, "mark"},
                 {"the", "DET", 6, "det"},
                 {noun, "NOUN", 7, "nsubj"},
                 {verb, "VERB", 3, "advcl"},
                 {adv, "ADV", 7, "advmod"}},
                3, 7};
    default:  // because the NOUN VERB ADV i felt EMO
        return {{{"because", "SCONJ", 4, "mark"},
                 {"the", "DET", 3, "det"},
                 {noun, "NOUN", 4, "nsubj"},
                 {verb, "VERB", 7, "advcl"},
                 {adv, "ADV", 4, "advmod"},
                 {"i", "PRON", 7, "nsubj"},
                 {"felt", "VERB", 0, "root"},
                 {emo, "ADJ", 7, "xcomp"}},
                0, 4};
    }
}

Sentence to_sentence(const SentenceSpec& spec, const std::string& review_id, std::size_t index)
{
    Sentence s;
    s.review_id = review_id;
    s.sentence_index = index;
    s.sent_id = review_id + "." + std::to_string(index);
    for (std::size_t i = 0; i < spec.tokens.size(); ++i) {
        const auto& t = spec.tokens[i];
        s.tokens.push_back({i, t.text, t.upos, t.head == 0 ? Token::kNoHead : t.head - 1, t.deprel});
    }
    return s;
}

std::string surface(const SentenceSpec& spec)
{
    std::string out;
    for (const auto& t : spec.tokens) {
        if (!out.empty()) out += ' ';
        out += t.text;
    }
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out + ".";
}

std::string zero_pad(std::size_t v, std::size_t width)
{
    auto s = std::to_string(v);
    return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

std::vector<double> gaussian(std::size_t d, double scale, nn::Rng& rng)
{
    std::vector<double> v(d);
    for (double& x : v) x = scale * rng.normal();
    return v;
}

std::vector<double> around(const std::vector<double>& base, double noise, nn::Rng& rng)
{
    auto v = base;
    for (double& x : v) x += noise * rng.normal();
    return v;
}

EmbeddingTable build_embeddings(const std::vector<std::string>& vocab, std::size_t dim, std::uint64_t seed)
{
    nn::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::vector<double>> emotion_base, topic_base;
    for (std::size_t e = 0; e < kNumEmotions; ++e) emotion_base.push_back(gaussian(dim, 1.0, rng));
    for (std::size_t t = 0; t < kTopics.size(); ++t) topic_base.push_back(gaussian(dim, 1.0, rng));

    std::map<std::string, std::pair<int, std::size_t>, std::less<>> category;  // 0 emotion, 1 topic
    for (std::size_t e = 0; e < kNumEmotions; ++e)
        for (const auto& w : kEmotionWords[e]) category[std::string(w.word)] = {0, e};
    for (std::size_t t = 0; t < kTopics.size(); ++t) {
        category[std::string(kTopics[t].noun)] = {1, t};
        for (auto v : kTopics[t].verbs) category[std::string(v)] = {1, t};
        for (auto a : kTopics[t].adverbs) category[std::string(a)] = {1, t};
    }
    const auto is_product = [](std::string_view w) {
        return std::find(kProductNouns.begin(), kProductNouns.end(), w) != kProductNouns.end();
    };

    EmbeddingTable table(dim);
    for (const auto& w : vocab) {
        std::vector<double> v;
        if (auto it = category.find(w); it != category.end()) {
            const auto [kind, idx] = it->second;
            v = kind == 0 ? around(emotion_base[idx], 0.25, rng) : around(topic_base[idx], 0.05, rng);
        } else if (is_product(w)) {
            v = gaussian(dim, 0.6, rng);
        } else {
            v = gaussian(dim, 0.15, rng);
        }
        table.add(w, v);
    }
    return table;
}

}  // namespace

const std::vector<std::string>& cause_marker_words()
{
    static const std::vector<std::string> words = [] {
        std::vector<std::string> out;
        for (const auto& t : kTopics) out.emplace_back(t.noun);
        return out;
    }();
    return words;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg)
{
    if (cfg.products == 0 || cfg.reviews == 0 || cfg.reviews % (2 * cfg.products) != 0)
        throw std::invalid_argument("reviews must be a positive multiple of 2 * products");
    if (cfg.dim == 0) throw std::invalid_argument("embedding dimension must be positive");

    nn::Rng rng(cfg.seed);
    SyntheticCorpus out;
    std::vector<std::string> vocab;
    std::map<std::string, bool, std::less<>> seen;
    const auto note = [&](const std::string& w) {
        if (seen.emplace(w, true).second) vocab.push_back(w);
    };

    const std::size_t per_emotion = cfg.reviews / cfg.products / 2;
    std::size_t serial = 0;
    const std::size_t width = std::to_string(cfg.reviews).size();
    for (std::size_t p = 0; p < cfg.products; ++p) {
        const std::string product_id = "p" + zero_pad(p, std::to_string(cfg.products).size());
        const auto product_noun = kProductNouns[p % kProductNouns.size()];

        std::vector<std::size_t> emotions(kNumEmotions);
        for (std::size_t e = 0; e < kNumEmotions; ++e) emotions[e] = e;
        rng.shuffle(emotions);
        emotions.resize(2);
        std::sort(emotions.begin(), emotions.end());

        for (auto e_idx : emotions) {
            const auto emotion = static_cast<Emotion>(e_idx);
            std::vector<std::size_t> pool;
            const bool positive = is_positive(emotion);
            for (std::size_t t = 0; t < kTopics.size(); ++t) {
                const bool topic_positive = t >= kNegativeTopics;
                if (emotion == Emotion::Surprise || topic_positive == positive) pool.push_back(t);
            }
            rng.shuffle(pool);
            const std::array<std::size_t, 2> topics = {pool[0], pool[1]};

            for (std::size_t k = 0; k < per_emotion; ++k) {
                const auto& topic = kTopics[topics[k % 2]];
                const auto& emotion_word = kEmotionWords[e_idx][rng.below(3)].word;
                const std::string review_id = "r" + zero_pad(serial++, width);

                const auto intro = intro_sentence(product_noun, rng);
                const auto main = emotion_sentence(emotion_word, topic, rng);

                ReviewRecord r;
                r.review_id = review_id;
                r.product_id = product_id;
                r.stars = stars_for(emotion, rng);
                r.text = surface(intro) + " " + surface(main);
                r.sent_ids = {review_id + ".0", review_id + ".1"};
                r.gold_emotion = emotion;
                r.gold_cause = GoldCause{1, main.cause_start, main.cause_end};
                out.records.push_back(std::move(r));
                out.sentences.push_back(to_sentence(intro, review_id, 0));
                out.sentences.push_back(to_sentence(main, review_id, 1));
                for (const auto* spec : {&intro, &main})
                    for (const auto& t : spec->tokens) note(t.text);
            }
        }
    }

    // Every emotion word is part of the vocabulary even if never drawn.
    for (const auto& words : kEmotionWords)
        for (const auto& w : words) note(std::string(w.word));
    out.embeddings = build_embeddings(vocab, cfg.dim, cfg.seed);

    for (std::size_t e = 0; e < kNumEmotions; ++e)
        for (const auto& w : kEmotionWords[e]) out.lexicon.add(std::string(w.word), static_cast<Emotion>(e), w.intensity);
    // A second label on one word and two entries outside the vocabulary.
    out.lexicon.add("amazed", Emotion::Joy, 0.5);
    out.lexicon.add("wrathful", Emotion::Anger, 0.906);
    out.lexicon.add("jubilant", Emotion::Joy, 0.938);
    return out;
}

SyntheticPaths synthetic_paths(const std::filesystem::path& dir)
{
    return {dir / "corpus.jsonl", dir / "parses.conllu", dir / "embeddings.txt", dir / "lexicon.tsv"};
}

void write_synthetic_corpus(const SyntheticCorpus& corpus, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    const auto paths = synthetic_paths(dir);
    {
        std::ofstream out(paths.corpus);
        if (!out) throw DataError("cannot write " + paths.corpus.string());
        write_corpus(corpus.records, out);
    }
    {
        std::ofstream out(paths.parses);
        if (!out) throw DataError("cannot write " + paths.parses.string());
        for (const auto& s : corpus.sentences) out << to_conllu(s);
    }
    save_word_embeddings(corpus.embeddings, paths.embeddings);
    {
        std::ofstream out(paths.lexicon);
        if (!out) throw DataError("cannot write " + paths.lexicon.string());
        write_emotion_lexicon(corpus.lexicon, out);
    }
}

}  // namespace ecpe
