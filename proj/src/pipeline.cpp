#include "ecpe/pipeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ecpe/error.hpp"
#include "ecpe/projection.hpp"

namespace ecpe {

using nlohmann::ordered_json;

std::vector<std::string> ReviewDocument::tokens() const
{
    std::vector<std::string> out;
    for (const auto* s : sentences)
        for (const auto& t : s->tokens) out.push_back(t.text);
    return out;
}

std::vector<Clause> ReviewDocument::clauses() const
{
    std::vector<Clause> out;
    for (const auto* s : sentences) {
        auto c = extract_clauses(*s);
        out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    }
    return out;
}

std::vector<ReviewDocument> align_reviews(std::span<const ReviewRecord> records, std::span<const Sentence> sentences)
{
    std::map<std::string, const Sentence*, std::less<>> by_sent_id;
    std::map<std::string, std::vector<const Sentence*>, std::less<>> by_review;
    for (const auto& s : sentences) {
        if (!s.sent_id.empty()) by_sent_id.emplace(s.sent_id, &s);
        by_review[s.review_id].push_back(&s);
    }
    std::vector<ReviewDocument> docs;
    docs.reserve(records.size());
    for (const auto& r : records) {
        ReviewDocument d{&r, {}};
        if (!r.sent_ids.empty()) {
            for (const auto& id : r.sent_ids)
                if (auto it = by_sent_id.find(id); it != by_sent_id.end()) d.sentences.push_back(it->second);
        } else if (auto it = by_review.find(r.review_id); it != by_review.end()) {
            d.sentences = it->second;
        }
        std::stable_sort(d.sentences.begin(), d.sentences.end(),
                         [](const Sentence* a, const Sentence* b) { return a->sentence_index < b->sentence_index; });
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<EmotionTrainExample> emotion_examples(std::span<const ReviewDocument> docs)
{
    std::vector<EmotionTrainExample> out;
    for (const auto& d : docs) {
        if (!d.record->gold_emotion || d.sentences.empty()) continue;
        out.push_back({d.tokens(), *d.record->gold_emotion});
    }
    return out;
}

std::vector<CauseTrainExample> cause_examples(std::span<const ReviewDocument> docs)
{
    std::vector<CauseTrainExample> out;
    for (const auto& d : docs) {
        const auto& r = *d.record;
        if (!r.gold_emotion || !r.gold_cause) continue;
        nn::Vector probs(kNumEmotions, 0.0);
        probs[index_of(*r.gold_emotion)] = 1.0;
        for (const auto& c : d.clauses()) {
            const bool is_cause = c.sentence_index == r.gold_cause->sentence_index &&
                                  c.span.start == r.gold_cause->start && c.span.end == r.gold_cause->end;
            out.push_back({c.words, probs, is_cause ? 1 : 0});
        }
    }
    return out;
}

namespace {

struct Attempt {
    std::optional<ReviewOutcome> outcome;
    std::optional<ClauseVector> vector;
};

Attempt analyse(const ReviewDocument& doc, const PipelineModels& m)
{
    Attempt a;
    try {
        if (doc.sentences.empty()) return a;
        const auto clauses = doc.clauses();
        if (clauses.empty()) return a;
        nn::Rng unused(0);
        const auto probs = emotion_probs(forward_emotion(m.emotion, doc.tokens(), m.aware, false, unused));
        const auto sel = select_cause_clause(m.cause, clauses, probs, m.aware);
        const auto& cause = clauses[sel.clause_index];
        a.vector = vectorize_clause(cause, m.raw, m.aware);
        a.outcome = ReviewOutcome{doc.record->review_id, doc.record->product_id, argmax_emotion(probs), probs, cause,
                                  sel.score};
    } catch (const DataError&) {
        a = {};
    }
    return a;
}

}  // namespace

SummaryReport summarize_reviews(std::span<const ReviewDocument> docs, const PipelineModels& models, double threshold)
{
    SummaryReport report;
    report.total = docs.size();
    report.threshold = threshold;

    std::vector<Attempt> attempts(docs.size());
    const auto n = static_cast<std::int64_t>(docs.size());
    // Per-review inference is independent; results land at fixed indices.
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) attempts[static_cast<std::size_t>(i)] = analyse(docs[static_cast<std::size_t>(i)], models);

    for (auto& a : attempts) {
        if (!a.outcome) {
            ++report.skipped;
            continue;
        }
        ++report.processed;
        report.entries.push_back({a.outcome->product_id, a.outcome->emotion, std::move(*a.vector)});
        report.outcomes.push_back(std::move(*a.outcome));
    }
    report.groups = cluster_causes(report.entries, threshold);
    return report;
}

SummaryReport run_pipeline(const PipelineConfig& cfg)
{
    const auto raw = load_word_embeddings(cfg.raw_embeddings);
    const auto aware = load_word_embeddings(cfg.aware_embeddings);
    const auto emotion = EmotionClassifier::load(cfg.emotion_model);
    const auto cause = CauseScorer::load(cfg.cause_model);
    const auto records = load_corpus(cfg.corpus);
    const auto sentences = load_conllu(cfg.parses);
    if (emotion.config().input_dim != aware.dim())
        throw DataError("emotion model expects dimension " + std::to_string(emotion.config().input_dim) +
                        ", embeddings have " + std::to_string(aware.dim()));
    if (cause.config().embedding_dim != aware.dim())
        throw DataError("cause model expects dimension " + std::to_string(cause.config().embedding_dim) +
                        ", embeddings have " + std::to_string(aware.dim()));
    const auto docs = align_reviews(records, sentences);
    return summarize_reviews(docs, {raw, aware, emotion, cause}, cfg.threshold);
}

namespace {

ordered_json clause_ref(const SummaryReport& r, std::size_t entry)
{
    return {{"review_id", r.entries[entry].vector.review_id}, {"clause_text", r.entries[entry].vector.text}};
}

}  // namespace

ordered_json report_json(const SummaryReport& report)
{
    ordered_json j;
    j["reviews_total"] = report.total;
    j["reviews_processed"] = report.processed;
    j["reviews_skipped"] = report.skipped;
    j["threshold"] = report.threshold;
    ordered_json groups = ordered_json::array();
    for (const auto& g : report.groups) {
        ordered_json gj;
        gj["product"] = g.product;
        gj["emotion"] = std::string(emotion_name(g.emotion));
        ordered_json clusters = ordered_json::array();
        for (const auto& c : g.clusters) {
            ordered_json members = ordered_json::array();
            for (auto m : c.members) members.push_back(clause_ref(report, m));
            clusters.push_back({{"head", clause_ref(report, c.head)}, {"size", c.members.size()}, {"members", members}});
        }
        gj["clusters"] = clusters;
        ordered_json pruned = ordered_json::array();
        for (auto p : g.pruned) pruned.push_back(clause_ref(report, p));
        gj["pruned"] = pruned;
        groups.push_back(std::move(gj));
    }
    j["groups"] = groups;
    ordered_json reviews = ordered_json::array();
    for (const auto& o : report.outcomes)
        reviews.push_back({{"review_id", o.review_id},
                           {"product", o.product_id},
                           {"emotion", std::string(emotion_name(o.emotion))},
                           {"cause", o.cause.text()},
                           {"cause_score", o.score}});
    j["reviews"] = reviews;
    return j;
}

std::string report_text(const SummaryReport& report)
{
    std::ostringstream out;
    out << "Reviews: " << report.total << " total, " << report.processed << " processed, " << report.skipped
        << " skipped\n";
    for (const auto& g : report.groups) {
        out << "\n[" << g.product << " / " << emotion_name(g.emotion) << "]\n";
        if (g.clusters.empty()) out << "  (no cluster of two or more causes)\n";
        for (const auto& c : g.clusters)
            out << "  - " << report.entries[c.head].vector.text << "  (" << c.members.size() << " reviews)\n";
        if (!g.pruned.empty()) out << "  unclustered: " << g.pruned.size() << "\n";
    }
    return out.str();
}

ordered_json projection_json(const SummaryReport& report)
{
    ordered_json out = ordered_json::array();
    for (const auto& g : report.groups) {
        std::vector<std::vector<double>> points;
        std::vector<std::pair<std::size_t, std::size_t>> owners;  // (cluster, entry)
        for (std::size_t c = 0; c < g.clusters.size(); ++c)
            for (auto m : g.clusters[c].members) {
                points.push_back(report.entries[m].vector.values);
                owners.emplace_back(c, m);
            }
        const auto proj = project_2d(points);
        ordered_json pts = ordered_json::array();
        for (std::size_t i = 0; i < proj.size(); ++i)
            pts.push_back({{"cluster", owners[i].first},
                           {"review_id", report.entries[owners[i].second].vector.review_id},
                           {"x", proj[i][0]},
                           {"y", proj[i][1]}});
        out.push_back({{"product", g.product}, {"emotion", std::string(emotion_name(g.emotion))}, {"points", pts}});
    }
    return out;
}

}  // namespace ecpe
